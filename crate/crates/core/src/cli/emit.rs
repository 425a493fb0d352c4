// Copyright 2026 The latsum Authors
//
// Licensed under the Apache license, version 2.0 (the "license");
// you may not use this file except in compliance with the license.
// You may obtain a copy of the license at
//
//     http://www.apache.org/licenses/license-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the license is distributed on an "as is" basis,
// without warranties or conditions of any kind, either express or implied.
// See the license for the specific language governing permissions and
// limitations under the license.

use std::fmt::Write as _;

use serde_json::{Map, Value};

use super::args::Format;

/// One CSV cell.
#[derive(Debug, Clone, PartialEq)]
pub enum Cell {
    Int(u64),
    Float(f64),
    Text(String),
}

impl From<u64> for Cell {
    fn from(v: u64) -> Self {
        Cell::Int(v)
    }
}

impl From<usize> for Cell {
    fn from(v: usize) -> Self {
        Cell::Int(v as u64)
    }
}

impl From<f64> for Cell {
    fn from(v: f64) -> Self {
        Cell::Float(v)
    }
}

impl From<&str> for Cell {
    fn from(v: &str) -> Self {
        Cell::Text(v.to_string())
    }
}

impl From<String> for Cell {
    fn from(v: String) -> Self {
        Cell::Text(v)
    }
}

impl From<bool> for Cell {
    fn from(v: bool) -> Self {
        Cell::Text(v.to_string())
    }
}

/// Shortest round-trip decimal for finite values.
pub fn format_float(v: f64) -> String {
    if v.is_finite() {
        ryu::Buffer::new().format_finite(v).to_string()
    } else if v.is_nan() {
        "NaN".into()
    } else if v > 0.0 {
        "inf".into()
    } else {
        "-inf".into()
    }
}

fn format_cell(c: &Cell) -> String {
    match c {
        Cell::Int(v) => v.to_string(),
        Cell::Float(v) => format_float(*v),
        Cell::Text(t) => t.clone(),
    }
}

fn format_meta(v: &Value) -> String {
    match v {
        Value::String(s) => s.clone(),
        other => other.to_string(),
    }
}

/// Output of one subcommand, rendered as CSV or JSON.
#[derive(Debug, Clone)]
pub struct Report {
    pub subcommand: &'static str,
    pub params: Map<String, Value>,
    pub header: Vec<&'static str>,
    pub rows: Vec<Vec<Cell>>,
    pub result: Value,
}

impl Report {
    pub fn render(&self, format: Format, timestamp: Option<u64>) -> String {
        match format {
            Format::Csv => self.render_csv(timestamp),
            Format::Json => self.render_json(timestamp),
        }
    }

    fn render_csv(&self, timestamp: Option<u64>) -> String {
        let mut out = String::new();
        let _ = writeln!(out, "# latsum {}", env!("CARGO_PKG_VERSION"));
        let _ = writeln!(out, "# subcommand: {}", self.subcommand);
        for (k, v) in &self.params {
            let _ = writeln!(out, "# {k}: {}", format_meta(v));
        }
        if let Some(t) = timestamp {
            let _ = writeln!(out, "# timestamp: {t}");
        }
        out.push_str(&self.header.join(","));
        out.push('\n');
        for row in &self.rows {
            let cells: Vec<String> = row.iter().map(format_cell).collect();
            out.push_str(&cells.join(","));
            out.push('\n');
        }
        out
    }

    fn render_json(&self, timestamp: Option<u64>) -> String {
        let mut obj = Map::new();
        obj.insert("subcommand".into(), Value::from(self.subcommand));
        obj.insert("version".into(), Value::from(env!("CARGO_PKG_VERSION")));
        if let Some(t) = timestamp {
            obj.insert("timestamp".into(), Value::from(t));
        }
        obj.insert("params".into(), Value::Object(self.params.clone()));
        obj.insert("result".into(), self.result.clone());
        let mut s = serde_json::to_string_pretty(&Value::Object(obj)).unwrap_or_default();
        s.push('\n');
        s
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn floats_round_trip() {
        for v in [-1.747_564_594_633_182, 0.1, 1e-300, 3.0, f64::MIN_POSITIVE] {
            assert_eq!(format_float(v).parse::<f64>().unwrap(), v);
        }
        assert_eq!(format_float(f64::NAN), "NaN");
    }

    #[test]
    fn csv_layout() {
        let mut params = Map::new();
        params.insert("dim".into(), Value::from(3));
        let r = Report {
            subcommand: "shells",
            params,
            header: vec!["n", "count"],
            rows: vec![vec![0u64.into(), 1u64.into()]],
            result: Value::Null,
        };
        let csv = r.render(Format::Csv, None);
        let lines: Vec<&str> = csv.lines().collect();
        assert!(lines[0].starts_with("# latsum"));
        assert_eq!(lines[2], "# dim: 3");
        assert_eq!(&lines[3..], ["n,count", "0,1"]);
        assert!(!csv.contains('\r'));
        assert!(r.render(Format::Csv, Some(7)).contains("# timestamp: 7"));
    }
}
