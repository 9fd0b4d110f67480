//! Table model and deterministic CSV/JSON emission.
//!
//! CSV files open with `# key = value` comment lines (config hash, seed,
//! generator identity, artifact version) followed by the column header and
//! data rows; floats print with 17 significant digits so golden files are
//! exact. JSON files carry the same metadata under a `meta` object, with
//! serde_json's shortest-round-trip float encoding (also exact).

use std::fmt::Write as _;

use serde_json::json;

use crate::config::OutputFormat;

/// One table cell.
#[derive(Debug, Clone, PartialEq)]
pub enum Value {
    UInt(u64),
    Float(f64),
    Text(String),
}

impl Value {
    fn csv(&self) -> String {
        match self {
            Value::UInt(v) => v.to_string(),
            Value::Float(v) => format_float(*v),
            Value::Text(v) => v.clone(),
        }
    }

    fn json(&self) -> serde_json::Value {
        match self {
            Value::UInt(v) => json!(v),
            Value::Float(v) => json!(v),
            Value::Text(v) => json!(v),
        }
    }
}

impl From<u64> for Value {
    fn from(v: u64) -> Self {
        Value::UInt(v)
    }
}

impl From<usize> for Value {
    fn from(v: usize) -> Self {
        Value::UInt(v as u64)
    }
}

impl From<f64> for Value {
    fn from(v: f64) -> Self {
        Value::Float(v)
    }
}

impl From<&str> for Value {
    fn from(v: &str) -> Self {
        Value::Text(v.to_string())
    }
}

impl From<String> for Value {
    fn from(v: String) -> Self {
        Value::Text(v)
    }
}

/// 17 significant digits, scientific form.
pub fn format_float(v: f64) -> String {
    if v.is_nan() {
        "nan".to_string()
    } else if v.is_infinite() {
        if v > 0.0 { "inf" } else { "-inf" }.to_string()
    } else {
        format!("{v:.16e}")
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Table {
    pub columns: Vec<&'static str>,
    pub rows: Vec<Vec<Value>>,
}

impl Table {
    pub fn new(columns: Vec<&'static str>) -> Self {
        Self {
            columns,
            rows: Vec::new(),
        }
    }

    pub fn push(&mut self, row: Vec<Value>) {
        debug_assert_eq!(row.len(), self.columns.len());
        self.rows.push(row);
    }
}

/// `key = value` metadata stamped ahead of the data.
#[derive(Debug, Clone)]
pub struct FileHeader {
    pub entries: Vec<(String, String)>,
}

impl FileHeader {
    pub fn new(config_sha: &str, seed: u64) -> Self {
        Self {
            entries: vec![
                ("config_sha".into(), config_sha.to_string()),
                ("seed".into(), seed.to_string()),
                ("rng".into(), zmx_core::rng::RNG_ID.to_string()),
                ("version".into(), env!("CARGO_PKG_VERSION").to_string()),
            ],
        }
    }

    pub fn with(mut self, key: &str, value: impl Into<String>) -> Self {
        self.entries.push((key.to_string(), value.into()));
        self
    }
}

/// Render one table to the final file contents.
pub fn render(table: &Table, header: &FileHeader, format: OutputFormat) -> String {
    match format {
        OutputFormat::Csv => {
            let mut out = String::new();
            for (k, v) in &header.entries {
                writeln!(out, "# {k} = {v}").expect("write to string");
            }
            writeln!(out, "{}", table.columns.join(",")).expect("write to string");
            for row in &table.rows {
                let cells: Vec<String> = row.iter().map(Value::csv).collect();
                writeln!(out, "{}", cells.join(",")).expect("write to string");
            }
            out
        }
        OutputFormat::Json => {
            let meta: serde_json::Map<String, serde_json::Value> = header
                .entries
                .iter()
                .map(|(k, v)| (k.clone(), json!(v)))
                .collect();
            let rows: Vec<serde_json::Value> = table
                .rows
                .iter()
                .map(|row| serde_json::Value::Array(row.iter().map(Value::json).collect()))
                .collect();
            let doc = json!({
                "meta": meta,
                "columns": table.columns,
                "rows": rows,
            });
            let mut text = serde_json::to_string_pretty(&doc).expect("json serializes");
            text.push('\n');
            text
        }
    }
}

/// Derive the sibling path carrying a suffixed table (`_summary`, `_mc`).
pub fn suffixed_path(path: &std::path::Path, suffix: &str) -> std::path::PathBuf {
    let stem = path
        .file_stem()
        .map(|s| s.to_string_lossy().into_owned())
        .unwrap_or_default();
    let ext = path
        .extension()
        .map(|s| s.to_string_lossy().into_owned());
    let name = match ext {
        Some(ext) => format!("{stem}{suffix}.{ext}"),
        None => format!("{stem}{suffix}"),
    };
    path.with_file_name(name)
}
