//! CSV and JSON output.
//!
//! CSV starts with `#`-prefixed metadata lines, then a header row and one row
//! per point. JSON is the [`SweepResult`] object itself. Numbers are written
//! in shortest round-trip form, so reloading JSON reproduces every finite
//! value bit for bit.

use std::path::Path;

use thiserror::Error;

use super::sweep::{Cell, SweepResult};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Format {
    Csv,
    Json,
}

impl std::str::FromStr for Format {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        match s.to_ascii_lowercase().as_str() {
            "csv" => Ok(Format::Csv),
            "json" => Ok(Format::Json),
            other => Err(format!("unknown format `{other}` (csv, json)")),
        }
    }
}

#[derive(Debug, Error)]
pub enum EmitError {
    #[error("I/O error on {path}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },
    #[error("JSON error: {0}")]
    Json(#[from] serde_json::Error),
    #[error("CSV error: {0}")]
    Csv(#[from] csv::Error),
}

fn format_f64(x: f64) -> String {
    let a = x.abs();
    if a != 0.0 && !(1e-4..1e15).contains(&a) {
        format!("{x:e}")
    } else {
        format!("{x}")
    }
}

fn format_cell(c: &Cell) -> String {
    match c {
        Cell::Value(x) => format_f64(*x),
        Cell::Sentinel(s) => s.as_str().to_string(),
    }
}

fn one_line(s: &str) -> String {
    s.replace(['\n', '\r'], " ")
}

pub fn to_csv(result: &SweepResult) -> Result<String, EmitError> {
    let m = &result.metadata;
    let sentinels: Vec<&str> = m.sentinels.iter().map(|s| s.as_str()).collect();
    let mut out = String::new();
    for (k, v) in [
        ("name", one_line(&result.name)),
        ("schema_version", result.schema_version.to_string()),
        ("generator", m.generator.clone()),
        ("squeezing_db", m.conventions.squeezing_db.clone()),
        ("gain_db", m.conventions.gain_db.clone()),
        ("units", m.conventions.units.clone()),
        ("spectra", m.conventions.spectra.clone()),
        ("sentinels", sentinels.join(",")),
        ("config", serde_json::to_string(&m.config)?),
    ] {
        out.push_str(&format!("# {k}: {v}\n"));
    }
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(&result.columns)?;
    for row in &result.rows {
        w.write_record(row.iter().map(format_cell))?;
    }
    let body = w.into_inner().map_err(|e| EmitError::Io {
        path: "<buffer>".into(),
        source: e.into_error(),
    })?;
    out.push_str(&String::from_utf8_lossy(&body));
    Ok(out)
}

pub fn to_json(result: &SweepResult) -> Result<String, EmitError> {
    let mut s = serde_json::to_string_pretty(result)?;
    s.push('\n');
    Ok(s)
}

pub fn parse_json(text: &str) -> Result<SweepResult, EmitError> {
    Ok(serde_json::from_str(text)?)
}

pub fn emit(result: &SweepResult, format: Format, path: impl AsRef<Path>) -> Result<(), EmitError> {
    let path = path.as_ref();
    let text = match format {
        Format::Csv => to_csv(result)?,
        Format::Json => to_json(result)?,
    };
    std::fs::write(path, text).map_err(|source| EmitError::Io {
        path: path.display().to_string(),
        source,
    })
}

pub fn load_json(path: impl AsRef<Path>) -> Result<SweepResult, EmitError> {
    let path = path.as_ref();
    let text = std::fs::read_to_string(path).map_err(|source| EmitError::Io {
        path: path.display().to_string(),
        source,
    })?;
    parse_json(&text)
}
