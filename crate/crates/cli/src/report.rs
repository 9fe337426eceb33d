//! Reports are built as ordered JSON objects and rendered either as JSON or
//! as a line-oriented text form carrying the same fields.
//!
//! Text form, one top-level field at a time:
//!
//! ```text
//! key: scalar
//! key: |            multi-line string, each line indented by two spaces
//!   line
//! key: []           empty list
//! key:              non-empty list; object items as `k=v; k=v`
//!   - item
//! key:              nested object, one level deep
//!   inner: scalar
//! ```

use serde_json::{Map, Value};

pub const SCHEMA_VERSION: u64 = 1;

#[derive(Clone, Copy, Debug, PartialEq, Eq, clap::ValueEnum)]
pub enum Format {
    Text,
    Json,
}

pub fn scalar(v: &Value) -> String {
    match v {
        Value::String(s) => s.clone(),
        Value::Null => "none".to_string(),
        other => other.to_string(),
    }
}

fn item(v: &Value) -> String {
    match v {
        Value::Object(m) => m
            .iter()
            .map(|(k, v)| format!("{k}={}", scalar(v)))
            .collect::<Vec<_>>()
            .join("; "),
        other => scalar(other),
    }
}

pub fn to_text(report: &Map<String, Value>) -> String {
    let mut out = String::new();
    for (key, v) in report {
        match v {
            Value::Array(items) if items.is_empty() => out.push_str(&format!("{key}: []\n")),
            Value::Array(items) => {
                out.push_str(&format!("{key}:\n"));
                for it in items {
                    out.push_str(&format!("  - {}\n", item(it)));
                }
            }
            Value::Object(inner) => {
                out.push_str(&format!("{key}:\n"));
                for (k, v) in inner {
                    out.push_str(&format!("  {k}: {}\n", scalar(v)));
                }
            }
            Value::String(s) if s.contains('\n') => {
                out.push_str(&format!("{key}: |\n"));
                for line in s.trim_end_matches('\n').lines() {
                    out.push_str(&format!("  {line}\n"));
                }
            }
            other => out.push_str(&format!("{key}: {}\n", scalar(other))),
        }
    }
    out
}

pub fn render(report: &Map<String, Value>, format: Format) -> String {
    match format {
        Format::Text => to_text(report),
        Format::Json => {
            let mut s = serde_json::to_string_pretty(report).expect("reports serialize");
            s.push('\n');
            s
        }
    }
}

/// Starts a report with the schema header.
pub fn new_report(command: &str) -> Map<String, Value> {
    let mut m = Map::new();
    m.insert("schema_version".into(), SCHEMA_VERSION.into());
    m.insert("command".into(), command.into());
    m
}
