//! CSV and JSON serialization of sweep results.
//!
//! CSV columns are `axis1,axis2,<quantities...>,converged`. Floats are written as
//! the shortest decimal that parses back to the same value; undefined cells are
//! empty in CSV and `null` in JSON.

use std::fmt::Write as _;
use std::path::Path;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

use super::SweepResult;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Csv,
    Json,
}

impl FromStr for Format {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "csv" => Ok(Self::Csv),
            "json" => Ok(Self::Json),
            _ => Err(Error::InvalidSweep(format!(
                "unknown format `{s}` (expected csv or json)"
            ))),
        }
    }
}

fn fmt_float(v: f64) -> String {
    let a = v.abs();
    if v == 0.0 || (1e-5..1e16).contains(&a) {
        format!("{v}")
    } else {
        format!("{v:e}")
    }
}

pub fn to_csv_string(result: &SweepResult) -> Result<String> {
    if result.spec.quantities.is_empty() {
        return Err(Error::NoQuantities);
    }
    let mut w = csv::WriterBuilder::new()
        .terminator(csv::Terminator::Any(b'\n'))
        .from_writer(Vec::new());
    let mut header = vec!["axis1".to_owned(), "axis2".to_owned()];
    header.extend(result.spec.quantities.iter().cloned());
    header.push("converged".to_owned());
    w.write_record(&header)?;
    let cell = |v: Option<f64>| v.map(fmt_float).unwrap_or_default();
    for row in &result.rows {
        let mut rec = vec![fmt_float(row.axis1), cell(row.axis2)];
        rec.extend(row.values.iter().map(|v| cell(*v)));
        rec.push(row.converged.to_string());
        w.write_record(&rec)?;
    }
    let bytes = w.into_inner().map_err(|e| Error::Io {
        path: "<memory>".into(),
        source: e.into_error(),
    })?;
    Ok(String::from_utf8(bytes).expect("csv output is ASCII"))
}

pub fn to_json_string(result: &SweepResult) -> Result<String> {
    if result.spec.quantities.is_empty() {
        return Err(Error::NoQuantities);
    }
    let mut s = serde_json::to_string_pretty(result)?;
    let _ = writeln!(s);
    Ok(s)
}

/// Parses a JSON export back into a result.
pub fn import_json(text: &str) -> Result<SweepResult> {
    Ok(serde_json::from_str(text)?)
}

pub fn export(result: &SweepResult, format: Format, destination: &Path) -> Result<()> {
    let text = match format {
        Format::Csv => to_csv_string(result)?,
        Format::Json => to_json_string(result)?,
    };
    std::fs::write(destination, text).map_err(|source| Error::Io {
        path: destination.display().to_string(),
        source,
    })
}
