//! The JSON report envelope and its CSV/table renderings.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};
use serde_json::Value;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunReport {
    pub command: String,
    pub parameters: BTreeMap<String, Value>,
    pub payload: Value,
    pub elapsed_ms: u64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum Format {
    Json,
    Csv,
    Table,
}

/// Flatten a JSON value into `(dotted.path, scalar)` pairs, arrays indexed
/// by position.
pub fn flatten(value: &Value) -> Vec<(String, String)> {
    fn walk(prefix: &str, v: &Value, out: &mut Vec<(String, String)>) {
        let key = |k: &str| if prefix.is_empty() { k.to_string() } else { format!("{prefix}.{k}") };
        match v {
            Value::Object(map) => map.iter().for_each(|(k, v)| walk(&key(k), v, out)),
            Value::Array(items) if !items.is_empty() => {
                items.iter().enumerate().for_each(|(i, v)| walk(&key(&i.to_string()), v, out))
            }
            Value::String(s) => out.push((prefix.to_string(), s.clone())),
            other => out.push((prefix.to_string(), other.to_string())),
        }
    }
    let mut out = Vec::new();
    walk("", value, &mut out);
    out
}

fn csv_field(s: &str) -> String {
    if s.contains([',', '"', '\n']) {
        format!("\"{}\"", s.replace('"', "\"\""))
    } else {
        s.to_string()
    }
}

impl RunReport {
    fn bounds_rows(&self) -> Option<Vec<sktour::bounds::BoundsRow>> {
        if self.command != "bounds" {
            return None;
        }
        serde_json::from_value(self.payload.get("rows")?.clone()).ok()
    }

    pub fn render(&self, format: Format) -> String {
        match format {
            Format::Json => serde_json::to_string_pretty(self).expect("reports serialize") + "\n",
            Format::Csv => {
                if let Some(rows) = self.bounds_rows() {
                    return sktour::bounds::table_to_csv(&rows);
                }
                let mut s = String::from("key,value\n");
                for (k, v) in flatten(&self.payload) {
                    s.push_str(&format!("{},{}\n", csv_field(&k), csv_field(&v)));
                }
                s
            }
            Format::Table => {
                let rows = flatten(&self.payload);
                let width = rows.iter().map(|(k, _)| k.len()).max().unwrap_or(0);
                let mut s = format!("{} ({} ms)\n", self.command, self.elapsed_ms);
                for (k, v) in &rows {
                    s.push_str(&format!("  {k:width$}  {v}\n"));
                }
                s
            }
        }
    }
}
