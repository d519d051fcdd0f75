//! Column-oriented output rendering: CSV (default) or JSON.

use std::fmt::Write as _;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Format {
    Csv,
    Json,
}

#[derive(Debug, Clone)]
pub enum Column {
    Int(Vec<i64>),
    Float(Vec<f64>),
}

/// An ordered set of named, equal-length columns.
#[derive(Debug, Clone, Default)]
pub struct Table {
    columns: Vec<(String, Column)>,
}

impl Table {
    pub fn new() -> Self {
        Table::default()
    }

    pub fn push_int(&mut self, name: &str, values: Vec<i64>) {
        self.columns.push((name.to_string(), Column::Int(values)));
    }

    pub fn push_float(&mut self, name: &str, values: Vec<f64>) {
        self.columns.push((name.to_string(), Column::Float(values)));
    }

    fn len(&self) -> usize {
        self.columns
            .first()
            .map(|(_, c)| match c {
                Column::Int(v) => v.len(),
                Column::Float(v) => v.len(),
            })
            .unwrap_or(0)
    }

    /// 17 significant digits: enough for exact f64 round-trips.
    fn fmt_float(v: f64) -> String {
        format!("{v:.16e}")
    }

    pub fn render(&self, format: Format) -> String {
        match format {
            Format::Csv => self.to_csv(),
            Format::Json => self.to_json(),
        }
    }

    fn to_csv(&self) -> String {
        let mut out = String::new();
        let names: Vec<&str> = self.columns.iter().map(|(n, _)| n.as_str()).collect();
        out.push_str(&names.join(","));
        out.push('\n');
        for row in 0..self.len() {
            let mut first = true;
            for (_, col) in &self.columns {
                if !first {
                    out.push(',');
                }
                first = false;
                match col {
                    Column::Int(v) => {
                        let _ = write!(out, "{}", v[row]);
                    }
                    Column::Float(v) => out.push_str(&Self::fmt_float(v[row])),
                }
            }
            out.push('\n');
        }
        out
    }

    fn to_json(&self) -> String {
        let mut map = serde_json::Map::new();
        for (name, col) in &self.columns {
            let arr = match col {
                Column::Int(v) => serde_json::json!(v),
                Column::Float(v) => serde_json::json!(v),
            };
            map.insert(name.clone(), arr);
        }
        let mut s = serde_json::to_string_pretty(&serde_json::Value::Object(map))
            .expect("table serialization cannot fail");
        s.push('\n');
        s
    }
}
