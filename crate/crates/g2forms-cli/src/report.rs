//! Report plumbing: every command produces one [`Report`], rendered either
//! as indented text or as pretty JSON. Both renderings read from the same
//! [`serde_json::Value`] tree, so the numbers are identical byte for byte.

use serde::Serialize;
use serde_json::{Map, Value};

#[derive(Serialize)]
pub struct Report {
    pub command: String,
    pub inputs: Map<String, Value>,
    pub outputs: Value,
    pub status: String,
}

impl Report {
    pub fn new(command: &str) -> Report {
        Report {
            command: command.to_string(),
            inputs: Map::new(),
            outputs: Value::Null,
            status: "ok".to_string(),
        }
    }

    pub fn input(mut self, key: &str, value: impl Serialize) -> Report {
        self.inputs.insert(
            key.to_string(),
            serde_json::to_value(value).expect("input values are plain data"),
        );
        self
    }

    pub fn outputs(mut self, outputs: impl Serialize) -> Report {
        self.outputs = serde_json::to_value(outputs).expect("outputs are plain data");
        self
    }

    /// Writes the report to stdout; a broken pipe is not an error.
    pub fn print(&self, json: bool) -> std::io::Result<()> {
        use std::io::Write;
        let text = if json {
            let mut s = serde_json::to_string_pretty(self).expect("report serializes");
            s.push('\n');
            s
        } else {
            self.to_text()
        };
        let mut stdout = std::io::stdout().lock();
        stdout.write_all(text.as_bytes())?;
        stdout.flush()
    }

    fn to_text(&self) -> String {
        let mut out = String::new();
        out.push_str(&format!("command: {}\n", self.command));
        if !self.inputs.is_empty() {
            out.push_str("inputs:\n");
            for (key, value) in &self.inputs {
                render_entry(key, value, 2, &mut out);
            }
        }
        out.push_str("outputs:\n");
        match &self.outputs {
            Value::Object(map) => {
                for (key, value) in map {
                    render_entry(key, value, 2, &mut out);
                }
            }
            other => render_value(other, 2, &mut out),
        }
        out.push_str(&format!("status: {}\n", self.status));
        out
    }
}

fn scalar_text(value: &Value) -> Option<String> {
    match value {
        Value::String(s) => Some(s.clone()),
        Value::Null => Some("null".to_string()),
        Value::Bool(_) | Value::Number(_) => Some(value.to_string()),
        _ => None,
    }
}

/// An array renders inline when every element is a scalar.
fn inline_array(items: &[Value]) -> Option<String> {
    let parts: Option<Vec<String>> = items.iter().map(scalar_text).collect();
    parts.map(|p| format!("[{}]", p.join(", ")))
}

/// One table cell: a scalar or an inlineable array.
fn cell_text(value: &Value) -> Option<String> {
    scalar_text(value).or_else(|| match value {
        Value::Array(items) => inline_array(items),
        _ => None,
    })
}

/// An array of objects sharing one flat key sequence renders as an aligned
/// table with a header row.
fn render_table(items: &[Value], indent: usize) -> Option<String> {
    let first = items.first()?.as_object()?;
    let keys: Vec<&String> = first.keys().collect();
    let mut grid: Vec<Vec<String>> = vec![keys.iter().map(|k| k.to_string()).collect()];
    for item in items {
        let object = item.as_object()?;
        if object.keys().collect::<Vec<_>>() != keys {
            return None;
        }
        let row: Option<Vec<String>> = keys.iter().map(|k| cell_text(&object[*k])).collect();
        grid.push(row?);
    }
    let widths: Vec<usize> = (0..keys.len())
        .map(|c| grid.iter().map(|row| row[c].len()).max().unwrap_or(0))
        .collect();
    let pad = " ".repeat(indent);
    let mut out = String::new();
    for row in &grid {
        let line: Vec<String> = row
            .iter()
            .zip(&widths)
            .map(|(cell, w)| format!("{cell:<w$}"))
            .collect();
        out.push_str(&format!("{pad}{}\n", line.join("  ").trim_end()));
    }
    Some(out)
}

fn render_entry(key: &str, value: &Value, indent: usize, out: &mut String) {
    let pad = " ".repeat(indent);
    if let Some(text) = scalar_text(value) {
        out.push_str(&format!("{pad}{key}: {text}\n"));
        return;
    }
    if let Value::Array(items) = value {
        if let Some(line) = inline_array(items) {
            out.push_str(&format!("{pad}{key}: {line}\n"));
            return;
        }
        if let Some(table) = render_table(items, indent + 2) {
            out.push_str(&format!("{pad}{key}:\n"));
            out.push_str(&table);
            return;
        }
    }
    out.push_str(&format!("{pad}{key}:\n"));
    render_value(value, indent + 2, out);
}

fn render_value(value: &Value, indent: usize, out: &mut String) {
    let pad = " ".repeat(indent);
    match value {
        Value::Object(map) => {
            for (key, inner) in map {
                render_entry(key, inner, indent, out);
            }
        }
        Value::Array(items) => {
            for item in items {
                if let Some(text) = scalar_text(item) {
                    out.push_str(&format!("{pad}- {text}\n"));
                } else if let Value::Array(inner) = item {
                    if let Some(line) = inline_array(inner) {
                        out.push_str(&format!("{pad}{line}\n"));
                        continue;
                    }
                    out.push_str(&format!("{pad}-\n"));
                    render_value(item, indent + 2, out);
                } else {
                    out.push_str(&format!("{pad}-\n"));
                    render_value(item, indent + 2, out);
                }
            }
        }
        other => {
            if let Some(text) = scalar_text(other) {
                out.push_str(&format!("{pad}{text}\n"));
            }
        }
    }
}
