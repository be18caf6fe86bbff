//! CSV ingestion: long format (value + group columns) or wide format (two
//! value columns), with dropped-cell accounting.

use std::collections::BTreeMap;
use std::io::Read;

use madstat::Sample;

use crate::errors::CliError;

/// Parsed one- or two-group data. Group a is the first/numerator group.
#[derive(Debug)]
pub struct GroupedData {
    pub group_a: Sample,
    pub group_b: Option<Sample>,
    pub label_a: String,
    pub label_b: Option<String>,
    /// Blank, non-numeric or non-finite cells dropped during ingestion.
    pub dropped: usize,
}

impl GroupedData {
    /// Reorders the groups so `label` comes first.
    pub fn with_first(mut self, label: &str) -> Result<Self, CliError> {
        if label == self.label_a {
            return Ok(self);
        }
        match (&self.label_b, &mut self.group_b) {
            (Some(b), Some(group_b)) if b == label => {
                std::mem::swap(&mut self.group_a, group_b);
                let old_a = std::mem::replace(&mut self.label_a, b.clone());
                self.label_b = Some(old_a);
                Ok(self)
            }
            _ => Err(CliError::Schema(format!(
                "--first label '{label}' matches no group"
            ))),
        }
    }
}

/// Resolves a column given by name or zero-based index.
fn resolve_column(headers: &csv::StringRecord, spec: &str) -> Result<usize, CliError> {
    if let Some(i) = headers.iter().position(|h| h == spec) {
        return Ok(i);
    }
    if let Ok(i) = spec.parse::<usize>() {
        if i < headers.len() {
            return Ok(i);
        }
    }
    Err(CliError::Schema(format!(
        "column '{spec}' not found (headers: {})",
        headers.iter().collect::<Vec<_>>().join(", ")
    )))
}

fn parse_cell(cell: Option<&str>) -> Option<f64> {
    let text = cell?.trim();
    if text.is_empty() {
        return None;
    }
    match text.parse::<f64>() {
        Ok(v) if v.is_finite() => Some(v),
        _ => None,
    }
}

/// Reads comma-separated data with a header row.
///
/// * `group_col` set: long format; rows carry a value and a group label, and
///   at most two distinct labels may appear. Groups are ordered by ascending
///   label.
/// * `value2_col` set: wide format; the two columns are the two groups,
///   labelled by their headers.
/// * neither: single-group data.
pub fn parse_csv<R: Read>(
    reader: R,
    value_col: &str,
    group_col: Option<&str>,
    value2_col: Option<&str>,
) -> Result<GroupedData, CliError> {
    let mut rdr = csv::ReaderBuilder::new().has_headers(true).from_reader(reader);
    let headers = rdr
        .headers()
        .map_err(|e| CliError::Schema(format!("cannot read CSV header: {e}")))?
        .clone();
    let value_idx = resolve_column(&headers, value_col)?;

    let mut dropped = 0usize;

    if let Some(group_col) = group_col {
        let group_idx = resolve_column(&headers, group_col)?;
        // BTreeMap keeps labels in ascending order
        let mut groups: BTreeMap<String, Vec<f64>> = BTreeMap::new();
        for row in rdr.records() {
            let row = row.map_err(|e| CliError::Schema(format!("bad CSV row: {e}")))?;
            let label = row.get(group_idx).map(str::trim).unwrap_or("");
            if label.is_empty() {
                dropped += 1;
                continue;
            }
            match parse_cell(row.get(value_idx)) {
                Some(v) => groups.entry(label.to_string()).or_default().push(v),
                None => {
                    groups.entry(label.to_string()).or_default();
                    dropped += 1;
                }
            }
        }
        if groups.len() > 2 {
            return Err(CliError::TooManyGroups(groups.len()));
        }
        let mut it = groups.into_iter();
        let (label_a, values_a) = it.next().ok_or(CliError::Stat(madstat::Error::EmptyInput))?;
        if values_a.is_empty() && it.len() == 0 {
            return Err(CliError::Stat(madstat::Error::EmptyInput));
        }
        let second = it.next();
        Ok(GroupedData {
            group_a: Sample::new(values_a).expect("filtered values are finite"),
            group_b: second
                .as_ref()
                .map(|(_, v)| Sample::new(v.clone()).expect("filtered values are finite")),
            label_a,
            label_b: second.map(|(l, _)| l),
            dropped,
        })
    } else if let Some(value2_col) = value2_col {
        let value2_idx = resolve_column(&headers, value2_col)?;
        let mut a = Vec::new();
        let mut b = Vec::new();
        for row in rdr.records() {
            let row = row.map_err(|e| CliError::Schema(format!("bad CSV row: {e}")))?;
            match parse_cell(row.get(value_idx)) {
                Some(v) => a.push(v),
                None => dropped += 1,
            }
            match parse_cell(row.get(value2_idx)) {
                Some(v) => b.push(v),
                None => dropped += 1,
            }
        }
        if a.is_empty() && b.is_empty() {
            return Err(CliError::Stat(madstat::Error::EmptyInput));
        }
        Ok(GroupedData {
            group_a: Sample::new(a).expect("filtered values are finite"),
            group_b: Some(Sample::new(b).expect("filtered values are finite")),
            label_a: headers.get(value_idx).unwrap_or("a").to_string(),
            label_b: Some(headers.get(value2_idx).unwrap_or("b").to_string()),
            dropped,
        })
    } else {
        let mut values = Vec::new();
        for row in rdr.records() {
            let row = row.map_err(|e| CliError::Schema(format!("bad CSV row: {e}")))?;
            match parse_cell(row.get(value_idx)) {
                Some(v) => values.push(v),
                None => dropped += 1,
            }
        }
        if values.is_empty() {
            return Err(CliError::Stat(madstat::Error::EmptyInput));
        }
        Ok(GroupedData {
            group_a: Sample::new(values).expect("filtered values are finite"),
            group_b: None,
            label_a: headers.get(value_idx).unwrap_or("value").to_string(),
            label_b: None,
            dropped,
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn long_format_two_groups_in_label_order() {
        let csv = "expr,status\n1.0,tumor\n2.0,normal\n3.0,tumor\n4.0,normal\n";
        let data = parse_csv(csv.as_bytes(), "expr", Some("status"), None).unwrap();
        assert_eq!(data.label_a, "normal");
        assert_eq!(data.label_b.as_deref(), Some("tumor"));
        assert_eq!(data.group_a.values(), &[2.0, 4.0]);
        assert_eq!(data.group_b.as_ref().unwrap().values(), &[1.0, 3.0]);
        assert_eq!(data.dropped, 0);
    }

    #[test]
    fn single_column_without_groups() {
        let csv = "x\n1.5\n2.5\n";
        let data = parse_csv(csv.as_bytes(), "x", None, None).unwrap();
        assert!(data.group_b.is_none());
        assert_eq!(data.group_a.values(), &[1.5, 2.5]);
    }

    #[test]
    fn non_numeric_cells_are_dropped_and_counted() {
        // the whitespace row is a blank cell; fully empty lines never reach
        // the parser
        let csv = "x\n1.0\nabc\n \n2.0\nNaN\n";
        let data = parse_csv(csv.as_bytes(), "x", None, None).unwrap();
        assert_eq!(data.group_a.values(), &[1.0, 2.0]);
        assert_eq!(data.dropped, 3);
    }

    #[test]
    fn three_groups_rejected() {
        let csv = "v,g\n1,a\n2,b\n3,c\n";
        let err = parse_csv(csv.as_bytes(), "v", Some("g"), None).unwrap_err();
        assert!(matches!(err, CliError::TooManyGroups(3)));
    }

    #[test]
    fn missing_column_is_schema_error() {
        let csv = "x\n1.0\n";
        let err = parse_csv(csv.as_bytes(), "y", None, None).unwrap_err();
        assert!(matches!(err, CliError::Schema(_)));
    }

    #[test]
    fn index_based_columns_work() {
        let csv = "a,b\n1.0,10.0\n2.0,20.0\n";
        let data = parse_csv(csv.as_bytes(), "0", None, Some("1")).unwrap();
        assert_eq!(data.group_a.values(), &[1.0, 2.0]);
        assert_eq!(data.group_b.as_ref().unwrap().values(), &[10.0, 20.0]);
        assert_eq!(data.label_a, "a");
        assert_eq!(data.label_b.as_deref(), Some("b"));
    }

    #[test]
    fn no_numeric_rows_is_empty_input() {
        let csv = "x\nfoo\nbar\n";
        let err = parse_csv(csv.as_bytes(), "x", None, None).unwrap_err();
        assert!(matches!(
            err,
            CliError::Stat(madstat::Error::EmptyInput)
        ));
    }

    #[test]
    fn first_label_reorders_groups() {
        let csv = "v,g\n1,a\n2,b\n";
        let data = parse_csv(csv.as_bytes(), "v", Some("g"), None).unwrap();
        let swapped = data.with_first("b").unwrap();
        assert_eq!(swapped.label_a, "b");
        assert_eq!(swapped.group_a.values(), &[2.0]);
        assert_eq!(swapped.label_b.as_deref(), Some("a"));

        let csv = "v,g\n1,a\n2,b\n";
        let data = parse_csv(csv.as_bytes(), "v", Some("g"), None).unwrap();
        assert!(data.with_first("zzz").is_err());
    }
}
