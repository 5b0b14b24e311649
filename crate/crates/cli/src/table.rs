//! Numeric result tables and their CSV form.

use std::io::Write;

use crate::error::{CliError, Result};

#[derive(Debug, Clone, PartialEq)]
pub struct ResultTable {
    pub columns: Vec<String>,
    pub rows: Vec<Vec<f64>>,
    /// Extra `#` comment lines, e.g. code legends.
    pub notes: Vec<String>,
}

impl ResultTable {
    pub fn new(columns: Vec<String>) -> Self {
        Self { columns, rows: Vec::new(), notes: Vec::new() }
    }

    pub fn push(&mut self, row: Vec<f64>) {
        assert_eq!(row.len(), self.columns.len(), "ragged row");
        self.rows.push(row);
    }

    pub fn column(&self, name: &str) -> Option<usize> {
        self.columns.iter().position(|c| c == name)
    }

    /// Values of column `name`, top to bottom.
    pub fn values(&self, name: &str) -> Vec<f64> {
        let i = self.column(name).unwrap_or_else(|| panic!("no column `{name}`"));
        self.rows.iter().map(|r| r[i]).collect()
    }

    /// Appends `other`, which must have the same columns.
    pub fn extend(&mut self, other: ResultTable) -> Result<()> {
        if other.columns != self.columns {
            return Err(CliError::Config("sweep points produced different columns".into()));
        }
        self.rows.extend(other.rows);
        for n in other.notes {
            if !self.notes.contains(&n) {
                self.notes.push(n);
            }
        }
        Ok(())
    }
}

pub struct Provenance {
    pub scenario: String,
    pub seed: u64,
    /// Seconds since the Unix epoch.
    pub timestamp: u64,
}

impl Provenance {
    /// Uses `SOURCE_DATE_EPOCH` when set, so reruns can be byte-identical.
    pub fn now(scenario: &str, seed: u64) -> Self {
        let timestamp = std::env::var("SOURCE_DATE_EPOCH")
            .ok()
            .and_then(|v| v.parse().ok())
            .unwrap_or_else(|| {
                std::time::SystemTime::now()
                    .duration_since(std::time::UNIX_EPOCH)
                    .map(|d| d.as_secs())
                    .unwrap_or(0)
            });
        Self { scenario: scenario.into(), seed, timestamp }
    }
}

pub fn write_csv<W: Write>(mut out: W, table: &ResultTable, prov: &Provenance) -> Result<()> {
    writeln!(out, "# scenario: {}", prov.scenario)?;
    writeln!(out, "# seed: {}", prov.seed)?;
    writeln!(out, "# version: greenstock {}", env!("CARGO_PKG_VERSION"))?;
    writeln!(out, "# timestamp: {}", prov.timestamp)?;
    for note in &table.notes {
        writeln!(out, "# {note}")?;
    }
    let mut w = csv::Writer::from_writer(out);
    w.write_record(&table.columns)?;
    for row in &table.rows {
        w.write_record(row.iter().map(|&x| sig6(x)))?;
    }
    w.flush()?;
    Ok(())
}

/// Six significant digits, `%g` style, trailing zeros removed.
pub fn sig6(x: f64) -> String {
    if x.is_nan() {
        return "nan".into();
    }
    if x.is_infinite() {
        return if x > 0.0 { "inf" } else { "-inf" }.into();
    }
    if x == 0.0 {
        return "0".into();
    }
    let sci = format!("{x:.5e}");
    let (mantissa, exp) = sci.split_once('e').expect("scientific format");
    let exp: i32 = exp.parse().expect("exponent");
    if (-5..6).contains(&exp) {
        let decimals = (5 - exp) as usize;
        trim(&format!("{x:.decimals$}")).to_string()
    } else {
        format!("{}e{exp}", trim(mantissa))
    }
}

fn trim(s: &str) -> &str {
    if s.contains('.') {
        s.trim_end_matches('0').trim_end_matches('.')
    } else {
        s
    }
}
