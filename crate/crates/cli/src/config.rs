//! JSON config files and parameter resolution.
//!
//! Precedence is command-line flags, then the file, then scenario defaults.

use std::collections::BTreeMap;
use std::path::{Path, PathBuf};

use serde::Deserialize;

use crate::error::{CliError, Result};

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ConfigFile {
    pub scenario: Option<String>,
    pub seed: Option<u64>,
    pub out: Option<PathBuf>,
    #[serde(default)]
    pub params: BTreeMap<String, f64>,
    pub sweep: Option<SweepSpec>,
}

impl ConfigFile {
    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).map_err(|source| CliError::Read { path: path.into(), source })?;
        serde_json::from_str(&text).map_err(|source| CliError::Parse { path: path.into(), source })
    }
}

/// Either an explicit list of values or an inclusive `from..=to` range.
#[derive(Debug, Clone, Default, PartialEq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SweepSpec {
    pub param: String,
    pub values: Option<Vec<f64>>,
    pub from: Option<f64>,
    pub to: Option<f64>,
    pub step: Option<f64>,
}

impl SweepSpec {
    /// Sweep points in ascending order.
    pub fn points(&self) -> Result<Vec<f64>> {
        let mut points = match (&self.values, self.from, self.to, self.step) {
            (Some(v), None, None, None) => v.clone(),
            (None, Some(from), Some(to), Some(step)) => {
                if !(step > 0.0) || !(to >= from) {
                    return Err(CliError::Config(format!(
                        "sweep range {from}..={to} step {step} is empty"
                    )));
                }
                let count = ((to - from) / step + 1e-9).floor() as usize + 1;
                (0..count).map(|k| round12(from + k as f64 * step)).collect()
            }
            _ => {
                return Err(CliError::Config(
                    "sweep needs either `values` or all of `from`, `to`, `step`".into(),
                ))
            }
        };
        if points.is_empty() {
            return Err(CliError::Config("sweep has no points".into()));
        }
        if let Some(bad) = points.iter().find(|v| !v.is_finite()) {
            return Err(CliError::Config(format!("sweep value {bad} is not finite")));
        }
        points.sort_by(f64::total_cmp);
        points.dedup();
        Ok(points)
    }
}

/// Strips accumulated floating-point noise from `from + k * step`.
fn round12(x: f64) -> f64 {
    format!("{x:.12e}").parse().expect("formatted float parses")
}

/// Ordered named parameters of one scenario.
#[derive(Debug, Clone, PartialEq)]
pub struct ParamSet {
    entries: Vec<(&'static str, f64)>,
}

impl ParamSet {
    pub fn new(entries: &[(&'static str, f64)]) -> Self {
        Self { entries: entries.to_vec() }
    }

    pub fn keys(&self) -> impl Iterator<Item = &'static str> + '_ {
        self.entries.iter().map(|(k, _)| *k)
    }

    pub fn values(&self) -> impl Iterator<Item = f64> + '_ {
        self.entries.iter().map(|(_, v)| *v)
    }

    pub fn contains(&self, key: &str) -> bool {
        self.entries.iter().any(|(k, _)| *k == key)
    }

    pub fn get(&self, key: &str) -> f64 {
        self.entries
            .iter()
            .find(|(k, _)| *k == key)
            .map(|(_, v)| *v)
            .unwrap_or_else(|| panic!("scenario reads undeclared parameter `{key}`"))
    }

    pub fn set(&mut self, key: &str, value: f64) -> Result<()> {
        if !value.is_finite() {
            return Err(CliError::Param { key: key.into(), value, reason: "must be finite".into() });
        }
        match self.entries.iter_mut().find(|(k, _)| *k == key) {
            Some(entry) => {
                entry.1 = value;
                Ok(())
            }
            None => Err(CliError::Config(format!(
                "unknown parameter `{key}` (expected one of: {})",
                self.keys().collect::<Vec<_>>().join(", ")
            ))),
        }
    }

    /// A non-negative integer parameter, at least `min`.
    pub fn count(&self, key: &str, min: usize) -> Result<usize> {
        let v = self.get(key);
        if v.fract() != 0.0 || v < min as f64 || v > 1e12 {
            return Err(CliError::Param {
                key: key.into(),
                value: v,
                reason: format!("must be an integer >= {min}"),
            });
        }
        Ok(v as usize)
    }
}

/// Parses a `key=value` override.
pub fn parse_assignment(s: &str) -> std::result::Result<(String, f64), String> {
    let (k, v) = s.split_once('=').ok_or_else(|| format!("expected key=value, got `{s}`"))?;
    let value = v.trim().parse::<f64>().map_err(|e| format!("`{v}`: {e}"))?;
    Ok((k.trim().to_string(), value))
}
