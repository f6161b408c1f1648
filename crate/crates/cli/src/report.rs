//! Report assembly and rendering.

use hyperavoid::rational::{format_decimal, parse_rational};
use serde::Serialize;
use serde_json::{Map, Value};

use crate::args::Format;

/// Fields holding exact rationals; each gets a sibling `<name>_decimal`.
const EXACT_FIELDS: &[&str] = &["alpha", "b", "bound", "ratio", "mean_one", "mean_pi", "one_density", "pi_density", "exact_value"];

const DECIMAL_DIGITS: usize = 12;

/// Rows of one subcommand plus the fixed CSV column order.
#[derive(Debug)]
pub struct Report {
    pub columns: &'static [&'static str],
    pub rows: Vec<Value>,
}

impl Report {
    pub fn new(columns: &'static [&'static str]) -> Self {
        Report { columns, rows: Vec::new() }
    }

    pub fn single<T: Serialize>(columns: &'static [&'static str], row: &T) -> serde_json::Result<Self> {
        let mut r = Report::new(columns);
        r.push(row)?;
        Ok(r)
    }

    pub fn push<T: Serialize>(&mut self, row: &T) -> serde_json::Result<()> {
        let mut value = serde_json::to_value(row)?;
        add_decimals(&mut value);
        self.rows.push(value);
        Ok(())
    }

    /// JSON: a single row renders as an object, any other count as an array.
    pub fn render(&self, format: Format) -> Result<String, crate::CliError> {
        match format {
            Format::Json => {
                let mut text =
                    if self.rows.len() == 1 { serde_json::to_string(&self.rows[0])? } else { serde_json::to_string(&self.rows)? };
                text.push('\n');
                Ok(text)
            }
            Format::Csv => {
                let mut w = csv::Writer::from_writer(Vec::new());
                w.write_record(self.columns)?;
                for row in &self.rows {
                    let mut flat = Map::new();
                    flatten("", row, &mut flat);
                    w.write_record(self.columns.iter().map(|c| match flat.get(*c) {
                        None | Some(Value::Null) => String::new(),
                        Some(Value::String(s)) => s.clone(),
                        Some(v) => v.to_string(),
                    }))?;
                }
                let bytes = w.into_inner().map_err(|e| crate::CliError::Io(e.into_error()))?;
                Ok(String::from_utf8(bytes).expect("csv output is UTF-8"))
            }
        }
    }
}

fn add_decimals(value: &mut Value) {
    match value {
        Value::Object(map) => {
            let mut extra = Vec::new();
            for (key, v) in map.iter_mut() {
                if let (true, Value::String(s)) = (EXACT_FIELDS.contains(&key.as_str()), &*v) {
                    let name = format!("{key}_decimal");
                    if let Ok(r) = parse_rational(s) {
                        extra.push((name, Value::String(format_decimal(&r, DECIMAL_DIGITS))));
                    }
                } else {
                    add_decimals(v);
                }
            }
            for (k, v) in extra {
                map.entry(k).or_insert(v);
            }
        }
        Value::Array(items) => items.iter_mut().for_each(add_decimals),
        _ => {}
    }
}

/// Nested objects become dotted column names; arrays stay as compact JSON.
fn flatten(prefix: &str, value: &Value, out: &mut Map<String, Value>) {
    match value {
        Value::Object(map) => {
            for (k, v) in map {
                let key = if prefix.is_empty() { k.clone() } else { format!("{prefix}.{k}") };
                flatten(&key, v, out);
            }
        }
        other => {
            out.insert(prefix.to_string(), other.clone());
        }
    }
}
