//! Flat `key = value` config files. Keys use the same names as the long
//! flags; explicit flags always win over config values.

use std::collections::BTreeMap;
use std::path::Path;

use crate::errors::CliError;

#[derive(Debug, Default)]
pub struct Config {
    entries: BTreeMap<String, String>,
    used: std::cell::RefCell<Vec<String>>,
}

impl Config {
    pub fn load(path: Option<&Path>) -> Result<Self, CliError> {
        let Some(path) = path else {
            return Ok(Config::default());
        };
        let text = std::fs::read_to_string(path)?;
        let mut entries = BTreeMap::new();
        for (lineno, raw) in text.lines().enumerate() {
            let line = raw.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let Some((key, value)) = line.split_once('=') else {
                return Err(CliError::BadValue(format!(
                    "{}:{}: expected 'key = value', got '{raw}'",
                    path.display(),
                    lineno + 1
                )));
            };
            entries.insert(key.trim().to_string(), value.trim().to_string());
        }
        Ok(Config {
            entries,
            used: std::cell::RefCell::new(Vec::new()),
        })
    }

    /// Fills `flag` from the config when the flag was not given, parsing the
    /// raw text with `FromStr`.
    pub fn merge<T: std::str::FromStr>(
        &self,
        flag: Option<T>,
        key: &str,
    ) -> Result<Option<T>, CliError>
    where
        T::Err: std::fmt::Display,
    {
        match self.entries.get(key) {
            Some(raw) => {
                self.used.borrow_mut().push(key.to_string());
                if flag.is_some() {
                    return Ok(flag); // flags win
                }
                raw.parse::<T>()
                    .map(Some)
                    .map_err(|e| CliError::BadValue(format!("config key '{key}': {e}")))
            }
            None => Ok(flag),
        }
    }

    /// Errors on config keys that no flag consumed (likely typos).
    pub fn finish(&self) -> Result<(), CliError> {
        let used = self.used.borrow();
        let unknown: Vec<&String> = self
            .entries
            .keys()
            .filter(|k| !used.iter().any(|u| u == *k))
            .collect();
        if unknown.is_empty() {
            Ok(())
        } else {
            Err(CliError::BadValue(format!(
                "unknown config keys: {}",
                unknown
                    .iter()
                    .map(|s| s.as_str())
                    .collect::<Vec<_>>()
                    .join(", ")
            )))
        }
    }
}
