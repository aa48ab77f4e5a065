//! JSON reports and CSV tables.

use std::fs;
use std::io::Write;
use std::path::Path;

use serde::Serialize;
use serde_json::{json, Value};

use crate::error::{Error, Result};

pub const SCHEMA_VERSION: u32 = 1;

/// `{schema, operation, parameters, rows, verdict}`.
#[derive(Clone, Debug, Serialize)]
pub struct JsonReport {
    pub schema: u32,
    pub operation: String,
    pub parameters: Value,
    pub rows: Vec<Value>,
    pub verdict: Value,
}

impl JsonReport {
    pub fn new(operation: &str, parameters: Value) -> Self {
        JsonReport {
            schema: SCHEMA_VERSION,
            operation: operation.into(),
            parameters,
            rows: Vec::new(),
            verdict: Value::Null,
        }
    }

    /// Adds a row `{inputs…, value, oracle, abs_error}`.
    pub fn push_compared(&mut self, inputs: Value, value: f64, oracle: Option<f64>) {
        let mut row = match inputs {
            Value::Object(m) => m,
            other => {
                let mut m = serde_json::Map::new();
                m.insert("input".into(), other);
                m
            }
        };
        row.insert("value".into(), json!(value));
        if let Some(o) = oracle {
            row.insert("oracle".into(), json!(o));
            row.insert("abs_error".into(), json!((value - o).abs()));
        }
        self.rows.push(Value::Object(row));
    }

    pub fn push_row<T: Serialize>(&mut self, row: &T) -> Result<()> {
        self.rows
            .push(serde_json::to_value(row).map_err(|e| Error::Format(e.to_string()))?);
        Ok(())
    }

    pub fn to_string_pretty(&self) -> String {
        // serialization of plain values cannot fail
        serde_json::to_string_pretty(self).expect("report serializes") + "\n"
    }

    pub fn write(&self, path: &Path) -> Result<()> {
        fs::write(path, self.to_string_pretty())?;
        Ok(())
    }
}

/// Formats a float for CSV with 17 significant digits.
pub fn fmt_f64(x: f64) -> String {
    format!("{x:.16e}")
}

/// Writes a CSV table; floats must already be formatted.
pub fn write_csv<W: Write>(out: &mut W, header: &[&str], rows: &[Vec<String>]) -> Result<()> {
    writeln!(out, "{}", header.join(","))?;
    for r in rows {
        if r.len() != header.len() {
            return Err(Error::DimensionMismatch {
                expected: header.len(),
                got: r.len(),
            });
        }
        writeln!(out, "{}", r.join(","))?;
    }
    Ok(())
}

pub fn write_csv_file(path: &Path, header: &[&str], rows: &[Vec<String>]) -> Result<()> {
    let mut buf = Vec::new();
    write_csv(&mut buf, header, rows)?;
    fs::write(path, buf)?;
    Ok(())
}
