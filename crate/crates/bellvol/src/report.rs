//! Machine-readable result records for the command-line front end.
//!
//! Every command emits exactly one [`OutputRecord`] (the sweep and boundary
//! tabulations stream plain CSV instead). JSON output is a single object per
//! run; CSV output is one header line plus one row. Floats are written with
//! 17 significant digits in CSV and shortest-round-trip notation in JSON, so
//! both parse back to the exact `f64`.

use serde::{Deserialize, Serialize};
use serde_json::Value;
use std::collections::BTreeMap;

/// Output encodings shared by the single-record commands.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum OutputFormat {
    Json,
    Csv,
    Text,
}

/// One run's inputs and outputs: the echoed command line, the effective
/// parameters, the result fields, tool version, and an RFC 3339 timestamp.
///
/// Field order (and the ordered parameter map) is fixed, so two runs of the
/// same command line differ only in the timestamp.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct OutputRecord {
    pub command: String,
    pub parameters: BTreeMap<String, Value>,
    pub results: Value,
    pub version: String,
    pub timestamp: String,
}

impl OutputRecord {
    pub fn new(
        command: impl Into<String>,
        parameters: BTreeMap<String, Value>,
        results: &impl Serialize,
    ) -> Self {
        OutputRecord {
            command: command.into(),
            parameters,
            results: serde_json::to_value(results).expect("results serialize to JSON"),
            version: env!("CARGO_PKG_VERSION").to_string(),
            timestamp: chrono::Utc::now().to_rfc3339(),
        }
    }

    pub fn render(&self, format: OutputFormat) -> String {
        match format {
            OutputFormat::Json => self.to_json(),
            OutputFormat::Csv => self.to_csv(),
            OutputFormat::Text => self.to_text(),
        }
    }

    /// Single-line JSON object, terminated by a newline.
    pub fn to_json(&self) -> String {
        let mut text = serde_json::to_string(self).expect("record serializes");
        text.push('\n');
        text
    }

    /// One header line and one data row. Nested result fields are flattened
    /// with dotted keys.
    pub fn to_csv(&self) -> String {
        let mut columns: Vec<(String, String)> = vec![
            ("command".to_string(), csv_escape(&self.command)),
            ("version".to_string(), csv_escape(&self.version)),
            ("timestamp".to_string(), csv_escape(&self.timestamp)),
        ];
        for (key, value) in &self.parameters {
            columns.push((format!("param.{key}"), csv_value(value)));
        }
        for (key, value) in flatten_value(&self.results) {
            columns.push((key, csv_value(&value)));
        }
        let header: Vec<&str> = columns.iter().map(|(k, _)| k.as_str()).collect();
        let row: Vec<&str> = columns.iter().map(|(_, v)| v.as_str()).collect();
        format!("{}\n{}\n", header.join(","), row.join(","))
    }

    /// Human-oriented key/value listing.
    pub fn to_text(&self) -> String {
        let mut out = String::new();
        out.push_str(&format!("command:   {}\n", self.command));
        for (key, value) in &self.parameters {
            out.push_str(&format!("param {key}: {}\n", text_value(value)));
        }
        for (key, value) in flatten_value(&self.results) {
            out.push_str(&format!("{key}: {}\n", text_value(&value)));
        }
        out.push_str(&format!("version:   {}\n", self.version));
        out.push_str(&format!("timestamp: {}\n", self.timestamp));
        out
    }
}

/// Lossless decimal rendering of an `f64`: 17 significant digits.
pub fn format_float_17(x: f64) -> String {
    format!("{x:.16e}")
}

fn flatten_value(value: &Value) -> Vec<(String, Value)> {
    let mut out = Vec::new();
    match value {
        Value::Object(map) => {
            for (key, inner) in map {
                match inner {
                    Value::Object(_) => {
                        for (nested_key, nested_value) in flatten_value(inner) {
                            out.push((format!("{key}.{nested_key}"), nested_value));
                        }
                    }
                    other => out.push((key.clone(), other.clone())),
                }
            }
        }
        other => out.push(("value".to_string(), other.clone())),
    }
    out
}

fn csv_value(value: &Value) -> String {
    match value {
        Value::Number(n) => {
            if let Some(i) = n.as_i64() {
                i.to_string()
            } else if let Some(u) = n.as_u64() {
                u.to_string()
            } else {
                format_float_17(n.as_f64().unwrap_or(f64::NAN))
            }
        }
        Value::String(s) => csv_escape(s),
        Value::Bool(b) => b.to_string(),
        Value::Null => String::new(),
        other => csv_escape(&other.to_string()),
    }
}

fn text_value(value: &Value) -> String {
    match value {
        Value::String(s) => s.clone(),
        other => other.to_string(),
    }
}

fn csv_escape(field: &str) -> String {
    if field.contains(',') || field.contains('"') || field.contains('\n') {
        format!("\"{}\"", field.replace('"', "\"\""))
    } else {
        field.to_string()
    }
}
