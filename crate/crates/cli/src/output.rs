//! JSON and CSV rendering of command results.
//!
//! CSV has two shapes. An array of flat objects becomes a table with one
//! column per key. Anything else is flattened into `path,value` rows, where
//! a path joins object keys and array indices with dots.

use anyhow::Result;
use serde_json::Value;

#[derive(Clone, Copy, Debug, PartialEq, Eq, clap::ValueEnum)]
pub enum Format {
    Json,
    Csv,
}

pub fn render(value: &Value, format: Format) -> Result<String> {
    match format {
        Format::Json => Ok(serde_json::to_string_pretty(value)? + "\n"),
        Format::Csv => to_csv(value),
    }
}

/// Scalar rendering shared by both CSV shapes.
pub fn scalar(value: &Value) -> String {
    match value {
        Value::Null => String::new(),
        Value::String(s) => s.clone(),
        Value::Array(a) if a.is_empty() => "[]".into(),
        Value::Object(o) if o.is_empty() => "{}".into(),
        other => other.to_string(),
    }
}

fn is_leaf(value: &Value) -> bool {
    match value {
        Value::Array(a) => a.is_empty(),
        Value::Object(o) => o.is_empty(),
        _ => true,
    }
}

/// Every leaf with its dotted path, in document order.
pub fn flatten(value: &Value) -> Vec<(String, String)> {
    fn walk(value: &Value, path: &mut Vec<String>, out: &mut Vec<(String, String)>) {
        match value {
            Value::Array(items) if !items.is_empty() => {
                for (i, item) in items.iter().enumerate() {
                    path.push(i.to_string());
                    walk(item, path, out);
                    path.pop();
                }
            }
            Value::Object(map) if !map.is_empty() => {
                for (k, v) in map {
                    path.push(k.clone());
                    walk(v, path, out);
                    path.pop();
                }
            }
            leaf => out.push((path.join("."), scalar(leaf))),
        }
    }
    let mut out = Vec::new();
    walk(value, &mut Vec::new(), &mut out);
    out
}

/// Column names when `value` is a non-empty array of flat objects that all
/// share the same keys.
fn table_columns(value: &Value) -> Option<Vec<String>> {
    let rows = value.as_array().filter(|r| !r.is_empty())?;
    let first = rows[0].as_object()?;
    let columns: Vec<String> = first.keys().cloned().collect();
    let flat = rows.iter().all(|r| {
        r.as_object().is_some_and(|o| o.len() == columns.len() && columns.iter().all(|c| o.get(c).is_some_and(is_leaf)))
    });
    flat.then_some(columns)
}

fn to_csv(value: &Value) -> Result<String> {
    let mut writer = csv::Writer::from_writer(Vec::new());
    if let Some(columns) = table_columns(value) {
        writer.write_record(&columns)?;
        for row in value.as_array().into_iter().flatten() {
            writer.write_record(columns.iter().map(|c| scalar(&row[c])))?;
        }
    } else {
        writer.write_record(["path", "value"])?;
        for (path, leaf) in flatten(value) {
            writer.write_record([path, leaf])?;
        }
    }
    Ok(String::from_utf8(writer.into_inner()?)?)
}
