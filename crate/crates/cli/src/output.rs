use std::fmt::Write as _;
use std::fs;
use std::path::Path;

use serde_json::{json, Map, Value};
use sha2::{Digest, Sha256};

use crate::config::Format;
use crate::CliError;

pub const VERSION: &str = env!("CARGO_PKG_VERSION");

/// Fixed 12-significant-digit rendering.
pub fn num(x: f64) -> String {
    format!("{x:.11e}")
}

/// Rounds to 12 significant digits for JSON output.
pub fn round12(x: f64) -> f64 {
    num(x).parse().expect("formatted float parses")
}

pub fn config_hash(canonical: &str) -> String {
    Sha256::digest(canonical.as_bytes())
        .iter()
        .fold(String::with_capacity(64), |mut s, b| {
            let _ = write!(s, "{b:02x}");
            s
        })
}

#[derive(Debug, Clone, PartialEq)]
pub enum Cell {
    Num(f64),
    Text(String),
    /// `;`-joined in CSV, an array in JSON.
    List(Vec<f64>),
    Missing,
}

impl Cell {
    fn csv(&self) -> String {
        match self {
            Cell::Num(x) => num(*x),
            Cell::Text(t) => t.clone(),
            Cell::List(v) if v.is_empty() => "NA".into(),
            Cell::List(v) => v.iter().map(|x| num(*x)).collect::<Vec<_>>().join(";"),
            Cell::Missing => "NA".into(),
        }
    }

    fn json(&self) -> Value {
        match self {
            Cell::Num(x) => json!(round12(*x)),
            Cell::Text(t) => json!(t),
            Cell::List(v) => json!(v.iter().map(|x| round12(*x)).collect::<Vec<_>>()),
            Cell::Missing => Value::Null,
        }
    }
}

impl From<f64> for Cell {
    fn from(x: f64) -> Self {
        Cell::Num(x)
    }
}

impl From<Option<f64>> for Cell {
    fn from(x: Option<f64>) -> Self {
        x.map_or(Cell::Missing, Cell::Num)
    }
}

impl From<String> for Cell {
    fn from(s: String) -> Self {
        Cell::Text(s)
    }
}

impl From<&str> for Cell {
    fn from(s: &str) -> Self {
        Cell::Text(s.to_string())
    }
}

/// Rows under a fixed header, rendered as CSV or JSON.
#[derive(Debug, Clone)]
pub struct Table {
    pub columns: Vec<String>,
    pub rows: Vec<Vec<Cell>>,
}

impl Table {
    pub fn new(columns: &[&str]) -> Self {
        Self {
            columns: columns.iter().map(|c| c.to_string()).collect(),
            rows: Vec::new(),
        }
    }

    pub fn push(&mut self, row: Vec<Cell>) {
        debug_assert_eq!(row.len(), self.columns.len());
        self.rows.push(row);
    }

    pub fn render(&self, format: Format, meta: &Meta) -> String {
        match format {
            Format::Csv => {
                let mut out = meta.comment_header();
                out.push_str(&self.columns.join(","));
                out.push('\n');
                for row in &self.rows {
                    let cells: Vec<String> = row.iter().map(Cell::csv).collect();
                    out.push_str(&cells.join(","));
                    out.push('\n');
                }
                out
            }
            Format::Json => {
                let records: Vec<Value> = self
                    .rows
                    .iter()
                    .map(|row| {
                        let obj: Map<String, Value> = self
                            .columns
                            .iter()
                            .cloned()
                            .zip(row.iter().map(Cell::json))
                            .collect();
                        Value::Object(obj)
                    })
                    .collect();
                let mut doc = meta.json();
                doc["records"] = Value::Array(records);
                pretty(&doc)
            }
        }
    }
}

pub fn pretty(v: &Value) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("json serializes");
    s.push('\n');
    s
}

/// Provenance embedded in every output.
#[derive(Debug, Clone)]
pub struct Meta {
    pub command: &'static str,
    pub config_sha256: String,
    pub skipped: usize,
}

impl Meta {
    fn comment_header(&self) -> String {
        format!(
            "# rectiflow {VERSION}\n# command: {}\n# config-sha256: {}\n# skipped: {}\n",
            self.command, self.config_sha256, self.skipped
        )
    }

    pub fn json(&self) -> Value {
        json!({
            "rectiflow": VERSION,
            "command": self.command,
            "config_sha256": self.config_sha256,
            "skipped": self.skipped,
        })
    }
}

/// Writes to `path`, or stdout when `None`.
pub fn emit(path: Option<&Path>, text: &str) -> Result<(), CliError> {
    match path {
        Some(p) => fs::write(p, text).map_err(|e| CliError::Io(format!("{}: {e}", p.display()))),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn twelve_significant_digits() {
        assert_eq!(num(0.5), "5.00000000000e-1");
        assert_eq!(num(-1234.5678901234), "-1.23456789012e3");
        assert_eq!(round12(1.0 / 3.0), 0.333333333333);
    }

    #[test]
    fn csv_has_header_and_na() {
        let mut t = Table::new(&["a", "b"]);
        t.push(vec![1.0.into(), Cell::Missing]);
        let meta = Meta {
            command: "point",
            config_sha256: config_hash("{}"),
            skipped: 0,
        };
        let csv = t.render(Format::Csv, &meta);
        assert!(csv.starts_with("# rectiflow "));
        assert!(csv.ends_with("a,b\n1.00000000000e0,NA\n"));
        assert!(csv.contains("44136fa355b3678a1146ad16f7e8649e94fb4fc21fe77e8310c060f61caaff8a"));
        let json: Value = serde_json::from_str(&t.render(Format::Json, &meta)).unwrap();
        assert_eq!(json["records"][0]["b"], Value::Null);
    }
}
