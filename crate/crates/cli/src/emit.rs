//! Result records and their byte-stable JSON and CSV renderings.
//!
//! Doubles are written as `{:.16e}` (17 significant digits), which
//! round-trips every finite `f64`. Object keys come out sorted because the
//! payload is a `serde_json::Value` built on `BTreeMap`.

use std::io::{self, Write};
use std::path::Path;

use serde::{Deserialize, Serialize};
use serde_json::Value;
use serde_json::ser::Formatter;

use crate::config::{Format, RunConfig};

pub const VERSION: &str = env!("CARGO_PKG_VERSION");

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ResultRecord {
    pub version: String,
    pub config: RunConfig,
    pub warnings: Vec<String>,
    /// Command output. Every payload carries a `table` object with
    /// `columns` and `rows`, which is what the CSV rendering prints.
    pub payload: Value,
}

impl ResultRecord {
    pub fn new(config: RunConfig, warnings: Vec<String>, payload: Value) -> Self {
        ResultRecord { version: VERSION.to_string(), config, warnings, payload }
    }
}

struct SigFigs;

impl Formatter for SigFigs {
    fn write_f64<W: ?Sized + Write>(&mut self, writer: &mut W, value: f64) -> io::Result<()> {
        if value.is_finite() {
            write!(writer, "{value:.16e}")
        } else {
            writer.write_all(b"null")
        }
    }

    fn write_f32<W: ?Sized + Write>(&mut self, writer: &mut W, value: f32) -> io::Result<()> {
        self.write_f64(writer, value as f64)
    }
}

pub fn to_json<T: Serialize>(value: &T) -> Result<Vec<u8>, serde_json::Error> {
    let mut buf = Vec::new();
    let mut ser = serde_json::Serializer::with_formatter(&mut buf, SigFigs);
    value.serialize(&mut ser)?;
    buf.push(b'\n');
    Ok(buf)
}

fn csv_cell(v: &Value) -> String {
    match v {
        Value::Null => String::new(),
        Value::Bool(b) => b.to_string(),
        Value::Number(n) => match n.as_f64() {
            Some(x) if !n.is_i64() && !n.is_u64() => format!("{x:.16e}"),
            _ => n.to_string(),
        },
        Value::String(s) if s.contains([',', '"', '\n']) => format!("\"{}\"", s.replace('"', "\"\"")),
        Value::String(s) => s.clone(),
        other => {
            let text = other.to_string();
            format!("\"{}\"", text.replace('"', "\"\""))
        }
    }
}

/// The payload's `table` as CSV with a header row.
pub fn to_csv(record: &ResultRecord) -> Result<Vec<u8>, io::Error> {
    let table = record.payload.get("table").ok_or_else(|| {
        io::Error::new(io::ErrorKind::InvalidData, "payload has no table to render as CSV")
    })?;
    let columns = table.get("columns").and_then(Value::as_array).cloned().unwrap_or_default();
    let rows = table.get("rows").and_then(Value::as_array).cloned().unwrap_or_default();
    let mut out = String::new();
    let header: Vec<String> = columns.iter().map(csv_cell).collect();
    out.push_str(&header.join(","));
    out.push('\n');
    for row in &rows {
        let cells: Vec<String> = row.as_array().map(|r| r.iter().map(csv_cell).collect()).unwrap_or_default();
        out.push_str(&cells.join(","));
        out.push('\n');
    }
    Ok(out.into_bytes())
}

pub fn render(record: &ResultRecord, format: Format) -> Result<Vec<u8>, io::Error> {
    match format {
        Format::Json => to_json(record).map_err(io::Error::other),
        Format::Csv => to_csv(record),
    }
}

/// Write `record` to `path`, or to stdout when `path` is `None`.
pub fn emit_results(record: &ResultRecord, path: Option<&Path>, format: Format) -> io::Result<()> {
    let bytes = render(record, format)?;
    match path {
        Some(p) => std::fs::write(p, bytes),
        None => io::stdout().lock().write_all(&bytes),
    }
}

pub fn read_record(path: &Path) -> io::Result<ResultRecord> {
    let text = std::fs::read(path)?;
    serde_json::from_slice(&text).map_err(io::Error::other)
}

/// Build a `table` value from column names and rows.
pub fn table(columns: &[&str], rows: Vec<Vec<Value>>) -> Value {
    serde_json::json!({ "columns": columns, "rows": rows })
}
