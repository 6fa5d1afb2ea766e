//! Tabular results and their three renderings.
//!
//! CSV cells carry 10 significant digits in plain decimal notation, JSON
//! carries the shortest representation that round-trips the `f64`, and the
//! human format rounds to 4 significant digits, switching to scientific
//! notation below 1e-4.

use std::fs;
use std::io::{self, Write};
use std::path::Path;

use anyhow::Context;
use serde_json::{Map, Number};

use crate::args::Format;

pub const CSV_DIGITS: usize = 10;
pub const HUMAN_DIGITS: usize = 4;

#[derive(Debug, Clone, PartialEq)]
pub enum Value {
    Num(f64),
    Int(u64),
    Text(String),
    Bool(bool),
}

impl From<f64> for Value {
    fn from(x: f64) -> Self {
        Value::Num(x)
    }
}

impl From<u64> for Value {
    fn from(x: u64) -> Self {
        Value::Int(x)
    }
}

impl From<bool> for Value {
    fn from(x: bool) -> Self {
        Value::Bool(x)
    }
}

impl From<String> for Value {
    fn from(x: String) -> Self {
        Value::Text(x)
    }
}

impl From<&str> for Value {
    fn from(x: &str) -> Self {
        Value::Text(x.to_owned())
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Column {
    pub name: String,
    pub unit: Option<&'static str>,
}

#[derive(Debug, Clone, Default, PartialEq)]
pub struct Table {
    pub columns: Vec<Column>,
    pub rows: Vec<Vec<Value>>,
}

impl Table {
    pub fn new<S: Into<String>>(
        columns: impl IntoIterator<Item = (S, Option<&'static str>)>,
    ) -> Self {
        Self {
            columns: columns
                .into_iter()
                .map(|(name, unit)| Column {
                    name: name.into(),
                    unit,
                })
                .collect(),
            rows: Vec::new(),
        }
    }

    pub fn push(&mut self, row: Vec<Value>) {
        debug_assert_eq!(row.len(), self.columns.len());
        self.rows.push(row);
    }

    pub fn render(&self, format: Format) -> anyhow::Result<String> {
        match format {
            Format::Csv => self.to_csv(),
            Format::Json => Ok(to_json_string(&self.to_json())?),
            Format::Human => Ok(self.to_human()),
        }
    }

    pub fn to_csv(&self) -> anyhow::Result<String> {
        let mut w = csv::Writer::from_writer(Vec::new());
        w.write_record(self.columns.iter().map(|c| c.name.as_str()))?;
        for row in &self.rows {
            w.write_record(row.iter().map(|v| cell(v, CSV_DIGITS)))?;
        }
        Ok(String::from_utf8(w.into_inner()?)?)
    }

    pub fn to_json(&self) -> serde_json::Value {
        let rows = self
            .rows
            .iter()
            .map(|row| {
                let mut obj = Map::new();
                for (col, v) in self.columns.iter().zip(row) {
                    obj.insert(col.name.clone(), json_value(v));
                }
                serde_json::Value::Object(obj)
            })
            .collect();
        serde_json::Value::Array(rows)
    }

    pub fn to_human(&self) -> String {
        let headers: Vec<String> = self
            .columns
            .iter()
            .map(|c| match c.unit {
                Some(u) => format!("{} [{u}]", c.name),
                None => c.name.clone(),
            })
            .collect();
        let cells: Vec<Vec<String>> = self
            .rows
            .iter()
            .map(|row| row.iter().map(|v| cell(v, HUMAN_DIGITS)).collect())
            .collect();

        let mut out = String::new();
        if let [row] = cells.as_slice() {
            let width = headers.iter().map(|h| h.len()).max().unwrap_or(0);
            for (h, v) in headers.iter().zip(row) {
                out.push_str(&format!("{h:<width$}  {v}\n"));
            }
            return out;
        }
        let widths: Vec<usize> = (0..headers.len())
            .map(|i| {
                cells
                    .iter()
                    .map(|r| r[i].len())
                    .chain([headers[i].len()])
                    .max()
                    .unwrap_or(0)
            })
            .collect();
        let line = |items: &[String]| {
            let padded: Vec<String> = items
                .iter()
                .zip(&widths)
                .map(|(s, &w)| format!("{s:>w$}"))
                .collect();
            padded.join("  ").trim_end().to_owned() + "\n"
        };
        out.push_str(&line(&headers));
        for row in &cells {
            out.push_str(&line(row));
        }
        out
    }
}

pub fn to_json_string(value: &serde_json::Value) -> anyhow::Result<String> {
    let mut s = serde_json::to_string_pretty(value)?;
    s.push('\n');
    Ok(s)
}

fn json_value(v: &Value) -> serde_json::Value {
    match v {
        Value::Num(x) => {
            Number::from_f64(*x).map_or(serde_json::Value::Null, serde_json::Value::Number)
        }
        Value::Int(n) => serde_json::Value::Number((*n).into()),
        Value::Text(s) => serde_json::Value::String(s.clone()),
        Value::Bool(b) => serde_json::Value::Bool(*b),
    }
}

fn cell(v: &Value, digits: usize) -> String {
    match v {
        Value::Num(x) if digits == HUMAN_DIGITS && *x != 0.0 && x.abs() < 1e-4 => {
            format!("{:.*e}", digits - 1, x)
        }
        Value::Num(x) => format_significant(*x, digits),
        Value::Int(n) => n.to_string(),
        Value::Text(s) => s.clone(),
        Value::Bool(b) => b.to_string(),
    }
}

/// Plain decimal with `digits` significant digits and trailing zeros removed.
pub fn format_significant(x: f64, digits: usize) -> String {
    if x.is_nan() {
        return "NaN".into();
    }
    if x.is_infinite() {
        return if x > 0.0 { "inf".into() } else { "-inf".into() };
    }
    if x == 0.0 {
        return "0".into();
    }
    // Round in scientific notation first so the exponent accounts for carries
    // such as 9.99995 -> 10.00.
    let sci = format!("{:.*e}", digits.saturating_sub(1), x);
    let exponent: i32 = sci
        .split_once('e')
        .and_then(|(_, e)| e.parse().ok())
        .unwrap_or(0);
    let decimals = (digits as i32 - 1 - exponent).max(0) as usize;
    let mut s = format!("{x:.decimals$}");
    if s.contains('.') {
        let trimmed = s.trim_end_matches('0').trim_end_matches('.').len();
        s.truncate(trimmed);
    }
    if s == "-0" {
        s = "0".into();
    }
    s
}

/// Writes `content` to `path`, or to standard output.
pub fn emit(content: &str, path: Option<&Path>) -> anyhow::Result<()> {
    match path {
        Some(p) => fs::write(p, content).with_context(|| format!("writing {}", p.display())),
        None => {
            let mut out = io::stdout().lock();
            out.write_all(content.as_bytes())?;
            out.flush()?;
            Ok(())
        }
    }
}
