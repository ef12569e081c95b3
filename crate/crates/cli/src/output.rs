//! Table rendering (CSV or JSON) and atomic file output.

use std::io::Write;
use std::path::Path;

use serde_json::{json, Value};

use crate::config::Format;
use crate::error::{CliError, Result};

#[derive(Debug, Clone, PartialEq)]
pub enum Cell {
    Text(String),
    Int(i64),
    Real(f64),
}

impl Cell {
    fn csv(&self) -> String {
        match self {
            Cell::Text(s) => s.clone(),
            Cell::Int(i) => i.to_string(),
            // 17 significant digits round-trip every double.
            Cell::Real(x) => format!("{x:.16e}"),
        }
    }

    fn json(&self) -> Value {
        match self {
            Cell::Text(s) => json!(s),
            Cell::Int(i) => json!(i),
            Cell::Real(x) if x.is_finite() => json!(x),
            Cell::Real(x) => json!(x.to_string()),
        }
    }
}

#[derive(Debug, Clone)]
pub struct Table {
    /// Metadata lines written above the CSV header.
    pub header: Vec<String>,
    /// Metadata for the JSON rendering; `config` is read back by `--config`.
    pub meta: Vec<(&'static str, Value)>,
    pub columns: Vec<&'static str>,
    pub rows: Vec<Vec<Cell>>,
}

impl Table {
    pub fn new(columns: &[&'static str]) -> Self {
        Self {
            header: Vec::new(),
            meta: Vec::new(),
            columns: columns.to_vec(),
            rows: Vec::new(),
        }
    }

    pub fn render(&self, format: Format) -> String {
        match format {
            Format::Csv => {
                let mut out = String::new();
                for line in &self.header {
                    out.push_str(line);
                    out.push('\n');
                }
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
                let mut root = serde_json::Map::new();
                for (key, value) in &self.meta {
                    root.insert((*key).to_string(), value.clone());
                }
                root.insert("columns".into(), json!(self.columns));
                let rows: Vec<Value> = self
                    .rows
                    .iter()
                    .map(|r| Value::Array(r.iter().map(Cell::json).collect()))
                    .collect();
                root.insert("rows".into(), Value::Array(rows));
                let mut text = serde_json::to_string_pretty(&Value::Object(root)).expect("JSON rendering");
                text.push('\n');
                text
            }
        }
    }
}

/// Writes `content` to `path` through a temporary file in the same directory,
/// so a failed run never leaves a partial file behind. `None` means stdout.
pub fn emit(path: Option<&Path>, content: &str) -> Result<()> {
    let Some(path) = path else {
        let mut stdout = std::io::stdout().lock();
        return stdout.write_all(content.as_bytes()).map_err(|source| CliError::Write {
            path: "<stdout>".into(),
            source,
        });
    };
    let write_err = |source| CliError::Write {
        path: path.to_path_buf(),
        source,
    };
    let dir = match path.parent() {
        Some(p) if !p.as_os_str().is_empty() => p,
        _ => Path::new("."),
    };
    let mut tmp = tempfile::NamedTempFile::new_in(dir).map_err(write_err)?;
    tmp.write_all(content.as_bytes()).map_err(write_err)?;
    tmp.as_file().sync_all().map_err(write_err)?;
    tmp.persist(path).map_err(|e| write_err(e.error))?;
    Ok(())
}
