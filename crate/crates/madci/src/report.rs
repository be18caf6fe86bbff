//! Report emission. JSON and CSV share one float convention: every float is
//! printed with 17 significant digits, so emitted reports re-parse to the
//! exact same values and can serve as inputs to tests.

use std::io::{self, Write};

use madstat::{ConfidenceInterval, CoverageSummary, EstimatedAsv, SimulationPlan};
use serde::Serialize;

use crate::errors::CliError;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Format {
    Json,
    Csv,
}

impl std::str::FromStr for Format {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.trim().to_ascii_lowercase().as_str() {
            "json" => Ok(Format::Json),
            "csv" => Ok(Format::Csv),
            other => Err(format!("unknown format '{other}' (json | csv)")),
        }
    }
}

/// Formats a float with 17 significant digits.
pub fn fmt_f64(v: f64) -> String {
    format!("{v:.16e}")
}

/// serde_json formatter that widens every f64 to 17 significant digits.
struct SigDigitFormatter;

impl serde_json::ser::Formatter for SigDigitFormatter {
    fn write_f64<W>(&mut self, writer: &mut W, value: f64) -> io::Result<()>
    where
        W: ?Sized + Write,
    {
        write!(writer, "{value:.16e}")
    }
}

/// Serializes any report as one JSON document plus trailing newline.
pub fn write_json<T: Serialize, W: Write>(value: &T, mut out: W) -> Result<(), CliError> {
    let mut ser = serde_json::Serializer::with_formatter(&mut out, SigDigitFormatter);
    value
        .serialize(&mut ser)
        .map_err(|e| CliError::Schema(format!("JSON serialization failed: {e}")))?;
    out.write_all(b"\n")?;
    Ok(())
}

/// Per-group estimation detail for interval reports.
#[derive(Debug, Serialize)]
pub struct GroupReport {
    pub label: String,
    pub n: usize,
    pub mad: f64,
    pub asv: f64,
    pub fit_objective: f64,
    pub fit_start_lambda3: f64,
    pub fit_start_lambda4: f64,
    pub lambda1: f64,
    pub lambda2: f64,
    pub lambda3: f64,
    pub lambda4: f64,
}

impl GroupReport {
    pub fn new(label: &str, n: usize, mad: f64, est: &EstimatedAsv) -> Self {
        GroupReport {
            label: label.to_string(),
            n,
            mad,
            asv: est.asv,
            fit_objective: est.fit.objective,
            fit_start_lambda3: est.fit.start.0,
            fit_start_lambda4: est.fit.start.1,
            lambda1: est.fit.params.lambda1,
            lambda2: est.fit.params.lambda2,
            lambda3: est.fit.params.lambda3,
            lambda4: est.fit.params.lambda4,
        }
    }
}

#[derive(Debug, Serialize)]
pub struct CiReport {
    pub command: &'static str,
    pub measure: String,
    pub level: f64,
    pub estimate: f64,
    pub lower: f64,
    pub upper: f64,
    pub groups: Vec<GroupReport>,
    pub dropped_rows: usize,
}

impl CiReport {
    pub fn write_csv<W: Write>(&self, mut out: W) -> Result<(), CliError> {
        let mut header = vec![
            "measure".to_string(),
            "level".into(),
            "estimate".into(),
            "lower".into(),
            "upper".into(),
            "dropped_rows".into(),
        ];
        let mut row = vec![
            self.measure.clone(),
            fmt_f64(self.level),
            fmt_f64(self.estimate),
            fmt_f64(self.lower),
            fmt_f64(self.upper),
            self.dropped_rows.to_string(),
        ];
        for (i, g) in self.groups.iter().enumerate() {
            let tag = if i == 0 { "a" } else { "b" };
            header.extend([
                format!("label_{tag}"),
                format!("n_{tag}"),
                format!("mad_{tag}"),
                format!("asv_{tag}"),
                format!("fit_objective_{tag}"),
            ]);
            row.extend([
                g.label.clone(),
                g.n.to_string(),
                fmt_f64(g.mad),
                fmt_f64(g.asv),
                fmt_f64(g.fit_objective),
            ]);
        }
        writeln!(out, "{}", header.join(","))?;
        writeln!(out, "{}", row.join(","))?;
        Ok(())
    }
}

/// Simulation report row; field order matches the CSV schema.
#[derive(Debug, Serialize)]
pub struct SimulateReport {
    pub measure: String,
    pub dist1: String,
    pub dist2: Option<String>,
    pub n1: usize,
    pub n2: Option<usize>,
    pub trials: usize,
    pub level: f64,
    pub coverage: f64,
    pub mean_width: f64,
    pub median_width: f64,
    pub heavy_tail_flag: bool,
    pub failed_trials: usize,
    pub truth: f64,
    pub seed: u64,
}

impl SimulateReport {
    pub fn new(plan: &SimulationPlan, summary: &CoverageSummary) -> Self {
        SimulateReport {
            measure: plan.measure.to_string(),
            dist1: plan.dist1.to_string(),
            dist2: plan.dist2.map(|d| d.to_string()),
            n1: plan.n1,
            n2: plan.n2,
            trials: plan.trials,
            level: plan.level,
            coverage: summary.coverage,
            mean_width: summary.mean_width,
            median_width: summary.median_width,
            heavy_tail_flag: summary.heavy_tail,
            failed_trials: summary.failed_trials,
            truth: summary.truth,
            seed: plan.seed,
        }
    }

    pub fn write_csv<W: Write>(&self, mut out: W) -> Result<(), CliError> {
        writeln!(
            out,
            "measure,dist1,dist2,n1,n2,trials,level,coverage,mean_width,median_width,heavy_tail_flag,failed_trials,truth,seed"
        )?;
        writeln!(
            out,
            "{},{},{},{},{},{},{},{},{},{},{},{},{},{}",
            self.measure,
            self.dist1,
            self.dist2.as_deref().unwrap_or(""),
            self.n1,
            self.n2.map(|n| n.to_string()).unwrap_or_default(),
            self.trials,
            fmt_f64(self.level),
            fmt_f64(self.coverage),
            fmt_f64(self.mean_width),
            fmt_f64(self.median_width),
            self.heavy_tail_flag,
            self.failed_trials,
            fmt_f64(self.truth),
            self.seed,
        )?;
        Ok(())
    }
}

#[derive(Debug, Serialize)]
pub struct PifPoint {
    pub x: f64,
    pub pif1: f64,
}

#[derive(Debug, Serialize)]
pub struct PifReport {
    pub command: &'static str,
    pub measure: String,
    pub dist1: String,
    pub dist2: String,
    pub from: f64,
    pub to: f64,
    pub step: f64,
    pub points: Vec<PifPoint>,
}

impl PifReport {
    pub fn write_csv<W: Write>(&self, mut out: W) -> Result<(), CliError> {
        writeln!(out, "x,pif1")?;
        for p in &self.points {
            writeln!(out, "{},{}", fmt_f64(p.x), fmt_f64(p.pif1))?;
        }
        Ok(())
    }
}

#[derive(Debug, Serialize)]
pub struct TruthReport {
    pub command: &'static str,
    pub dist1: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub dist2: Option<String>,
    pub mad1: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub mad2: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub ratio_sq: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub diff: Option<f64>,
}

impl TruthReport {
    pub fn write_csv<W: Write>(&self, mut out: W) -> Result<(), CliError> {
        writeln!(out, "dist1,dist2,mad1,mad2,ratio_sq,diff")?;
        writeln!(
            out,
            "{},{},{},{},{},{}",
            self.dist1,
            self.dist2.as_deref().unwrap_or(""),
            fmt_f64(self.mad1),
            self.mad2.map(fmt_f64).unwrap_or_default(),
            self.ratio_sq.map(fmt_f64).unwrap_or_default(),
            self.diff.map(fmt_f64).unwrap_or_default(),
        )?;
        Ok(())
    }
}

/// Library interval plus report assembly used by `madci ci`.
pub fn ci_report(
    measure: &str,
    level: f64,
    interval: &ConfidenceInterval,
    groups: Vec<GroupReport>,
    dropped_rows: usize,
) -> CiReport {
    CiReport {
        command: "ci",
        measure: measure.to_string(),
        level,
        estimate: interval.estimate,
        lower: interval.lower,
        upper: interval.upper,
        groups,
        dropped_rows,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn json_floats_roundtrip_exactly() {
        #[derive(Serialize)]
        struct Probe {
            a: f64,
            b: f64,
        }
        let probe = Probe {
            a: 0.494_427_190_999_917_6,
            b: 1.0 / 3.0,
        };
        let mut buf = Vec::new();
        write_json(&probe, &mut buf).unwrap();
        let text = String::from_utf8(buf).unwrap();
        let back: serde_json::Value = serde_json::from_str(&text).unwrap();
        assert_eq!(back["a"].as_f64().unwrap(), probe.a);
        assert_eq!(back["b"].as_f64().unwrap(), probe.b);
    }

    #[test]
    fn fmt_f64_has_17_significant_digits() {
        assert_eq!(fmt_f64(0.5), "5.0000000000000000e-1");
        let parsed: f64 = fmt_f64(std::f64::consts::PI).parse().unwrap();
        assert_eq!(parsed, std::f64::consts::PI);
    }
}
