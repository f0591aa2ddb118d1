//! Tabular reports with a config header, rendered as CSV or JSON. The
//! rendering is deterministic: identical data yields identical bytes.

use std::fmt::Write as _;
use std::fs;
use std::path::Path;

use anyhow::Context;
use serde_json::{json, Map, Value};

use crate::config::{ExperimentConfig, Format};

/// One table cell. `Empty` renders as a blank CSV field and a JSON null.
#[derive(Debug, Clone, PartialEq)]
pub enum Cell {
    Int(i64),
    Float(f64),
    Text(String),
    Bool(bool),
    Empty,
}

impl Cell {
    pub fn opt_float(value: Option<f64>) -> Cell {
        value.map_or(Cell::Empty, Cell::Float)
    }

    pub fn opt_int(value: Option<i64>) -> Cell {
        value.map_or(Cell::Empty, Cell::Int)
    }

    fn to_csv_field(&self) -> String {
        match self {
            Cell::Int(v) => v.to_string(),
            Cell::Float(v) => v.to_string(),
            Cell::Text(v) => v.clone(),
            Cell::Bool(v) => v.to_string(),
            Cell::Empty => String::new(),
        }
    }

    fn to_json(&self) -> Value {
        match self {
            Cell::Int(v) => json!(v),
            Cell::Float(v) if v.is_finite() => json!(v),
            Cell::Float(_) => Value::Null,
            Cell::Text(v) => json!(v),
            Cell::Bool(v) => json!(v),
            Cell::Empty => Value::Null,
        }
    }
}

/// A finished experiment: the config that produced it, the code version,
/// and a rectangular table of results.
#[derive(Debug, Clone)]
pub struct Report {
    pub command: String,
    pub version: String,
    pub config: Vec<(&'static str, String)>,
    pub columns: Vec<String>,
    pub rows: Vec<Vec<Cell>>,
}

impl Report {
    pub fn new(config: &ExperimentConfig, columns: &[&str]) -> Report {
        Report {
            command: config.command.clone(),
            version: env!("CARGO_PKG_VERSION").to_string(),
            config: config.pairs(),
            columns: columns.iter().map(|c| c.to_string()).collect(),
            rows: Vec::new(),
        }
    }

    pub fn push_row(&mut self, row: Vec<Cell>) {
        debug_assert_eq!(row.len(), self.columns.len());
        self.rows.push(row);
    }

    pub fn render(&self, format: Format) -> String {
        match format {
            Format::Csv => self.to_csv(),
            Format::Json => self.to_json(),
        }
    }

    /// CSV with `# key=value` header comments, then a header row, then data.
    pub fn to_csv(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(out, "# version={}", self.version);
        for (key, value) in &self.config {
            let _ = writeln!(out, "# {key}={value}");
        }
        let header: Vec<String> = self.columns.iter().map(|c| csv_quote(c)).collect();
        let _ = writeln!(out, "{}", header.join(","));
        for row in &self.rows {
            let fields: Vec<String> =
                row.iter().map(|c| csv_quote(&c.to_csv_field())).collect();
            let _ = writeln!(out, "{}", fields.join(","));
        }
        out
    }

    pub fn to_json(&self) -> String {
        let mut config = Map::new();
        for (key, value) in &self.config {
            config.insert(key.to_string(), json!(value));
        }
        let rows: Vec<Value> = self
            .rows
            .iter()
            .map(|row| Value::Array(row.iter().map(Cell::to_json).collect()))
            .collect();
        let doc = json!({
            "command": self.command,
            "version": self.version,
            "config": Value::Object(config),
            "columns": self.columns,
            "rows": rows,
        });
        let mut text = serde_json::to_string_pretty(&doc).expect("report serializes");
        text.push('\n');
        text
    }

    /// Write to `path`, or to stdout when no path is given.
    pub fn write(&self, path: Option<&Path>, format: Format) -> anyhow::Result<()> {
        let text = self.render(format);
        match path {
            Some(p) => fs::write(p, text)
                .with_context(|| format!("writing report to {}", p.display()))?,
            None => print!("{text}"),
        }
        Ok(())
    }
}

// RFC 4180 quoting: wrap fields containing separators or quotes, doubling
// any embedded quotes.
fn csv_quote(field: &str) -> String {
    if field.contains([',', '"', '\n', '\r']) {
        format!("\"{}\"", field.replace('"', "\"\""))
    } else {
        field.to_string()
    }
}
