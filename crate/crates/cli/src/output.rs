//! Tables rendered as CSV, JSON or aligned text.

use std::io;

use clap::ValueEnum;
use latdisp_core::{Expr, QuadraticNumber, Result};
use num_rational::BigRational;
use serde_json::{json, Map, Value};

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Csv,
    Json,
    Pretty,
}

/// A value with its exact text and its decimal rendering.
#[derive(Clone, Debug)]
pub enum Cell {
    Num { exact: String, decimal: String },
    Int(String),
    Bool(bool),
    Text(String),
    List(Vec<u64>),
}

impl Cell {
    pub fn qn(x: &QuadraticNumber, digits: u32) -> Self {
        Cell::Num { exact: x.to_string(), decimal: x.to_decimal(digits) }
    }

    pub fn rat(x: &BigRational, digits: u32) -> Self {
        Self::qn(&QuadraticNumber::from_rational(x.clone()), digits)
    }

    pub fn expr(x: &Expr, digits: u32) -> Result<Self> {
        Ok(match x.exact() {
            Some(q) => Self::qn(q, digits),
            None => Cell::Num { exact: x.to_string(), decimal: x.to_decimal(digits)? },
        })
    }

    pub fn int(x: impl ToString) -> Self {
        Cell::Int(x.to_string())
    }

    pub fn text(x: impl ToString) -> Self {
        Cell::Text(x.to_string())
    }

    fn json(&self) -> Value {
        match self {
            Cell::Num { exact, decimal } => json!({ "exact": exact, "decimal": decimal }),
            Cell::Int(s) => s.parse::<i64>().map(Value::from).unwrap_or_else(|_| Value::String(s.clone())),
            Cell::Bool(b) => Value::Bool(*b),
            Cell::Text(s) => Value::String(s.clone()),
            Cell::List(v) => Value::from(v.clone()),
        }
    }

    /// Flat text cells: numbers expand to exact and decimal.
    fn flat(&self) -> Vec<String> {
        match self {
            Cell::Num { exact, decimal } => vec![exact.clone(), decimal.clone()],
            Cell::Int(s) | Cell::Text(s) => vec![s.clone()],
            Cell::Bool(b) => vec![b.to_string()],
            Cell::List(v) => vec![v.iter().map(u64::to_string).collect::<Vec<_>>().join(",")],
        }
    }
}

pub struct Table {
    pub columns: Vec<&'static str>,
    pub rows: Vec<Vec<Cell>>,
    /// Render JSON as one object instead of an array.
    pub single: bool,
}

impl Table {
    pub fn new(columns: &[&'static str]) -> Self {
        Self { columns: columns.to_vec(), rows: Vec::new(), single: false }
    }

    pub fn single(columns: &[&'static str], row: Vec<Cell>) -> Self {
        Self { columns: columns.to_vec(), rows: vec![row], single: true }
    }

    pub fn push(&mut self, row: Vec<Cell>) {
        debug_assert_eq!(row.len(), self.columns.len());
        self.rows.push(row);
    }

    fn flat_header(&self) -> Vec<String> {
        let first = self.rows.first();
        self.columns
            .iter()
            .enumerate()
            .flat_map(|(k, c)| match first.map(|r| &r[k]) {
                Some(Cell::Num { .. }) => vec![c.to_string(), format!("{c}_decimal")],
                _ => vec![c.to_string()],
            })
            .collect()
    }

    pub fn write(&self, format: Format, out: &mut dyn io::Write) -> io::Result<()> {
        match format {
            Format::Csv => {
                let mut w = csv::Writer::from_writer(out);
                w.write_record(self.flat_header())?;
                for row in &self.rows {
                    w.write_record(row.iter().flat_map(Cell::flat))?;
                }
                w.flush()
            }
            Format::Json => {
                let objects: Vec<Value> = self
                    .rows
                    .iter()
                    .map(|row| {
                        let m: Map<String, Value> =
                            self.columns.iter().zip(row).map(|(c, v)| (c.to_string(), v.json())).collect();
                        Value::Object(m)
                    })
                    .collect();
                let v = match (self.single, objects.len()) {
                    (true, 1) => objects.into_iter().next().expect("one row"),
                    _ => Value::Array(objects),
                };
                serde_json::to_writer_pretty(&mut *out, &v)?;
                writeln!(out)
            }
            Format::Pretty => {
                let header = self.flat_header();
                let body: Vec<Vec<String>> = self.rows.iter().map(|r| r.iter().flat_map(Cell::flat).collect()).collect();
                let mut widths: Vec<usize> = header.iter().map(String::len).collect();
                for r in &body {
                    for (w, c) in widths.iter_mut().zip(r) {
                        *w = (*w).max(c.len());
                    }
                }
                for line in std::iter::once(&header).chain(&body) {
                    let cells: Vec<String> = line.iter().zip(&widths).map(|(c, w)| format!("{c:<w$}")).collect();
                    writeln!(out, "{}", cells.join("  ").trim_end())?;
                }
                Ok(())
            }
        }
    }
}
