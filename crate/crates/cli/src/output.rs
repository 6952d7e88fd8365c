use std::fmt;

use clap::ValueEnum;
use flab_core::exact::format_rational;
use flab_core::geometry::formats::format_point;
use flab_core::geometry::{Point, Subspace};
use flab_core::gf::Field;
use num_rational::BigRational;
use serde_json::Value;

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Csv,
    Text,
}

impl fmt::Display for Format {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Format::Json => "json",
            Format::Csv => "csv",
            Format::Text => "text",
        })
    }
}

/// A finished report in every format it supports.
pub struct Report {
    pub json: Value,
    pub csv: Option<String>,
    pub text: String,
}

impl Report {
    pub fn new(json: Value, text: String) -> Self {
        Report { json, csv: None, text }
    }

    pub fn with_csv(mut self, csv: String) -> Self {
        self.csv = Some(csv);
        self
    }

    /// `None` when the report has no rendering in `format`.
    pub fn emit(&self, format: Format) -> Option<String> {
        match format {
            Format::Json => {
                let mut s = serde_json::to_string_pretty(&self.json).expect("values are serializable");
                s.push('\n');
                Some(s)
            }
            Format::Csv => self.csv.clone(),
            Format::Text => Some(self.text.clone()),
        }
    }
}

pub fn rational(r: &BigRational) -> String {
    format_rational(r)
}

pub fn point(field: &Field, p: &Point) -> String {
    format_point(field, p)
}

pub fn subspace(field: &Field, s: &Subspace) -> String {
    s.basis()
        .row_iter()
        .map(|r| format_point(field, &Point::new(r.to_vec())))
        .collect::<Vec<_>>()
        .join(" , ")
}

/// Quotes a CSV field when it holds a comma or quote.
pub fn csv_field(s: &str) -> String {
    if s.contains([',', '"', '\n']) {
        format!("\"{}\"", s.replace('"', "\"\""))
    } else {
        s.to_string()
    }
}

pub fn csv(header: &str, rows: impl IntoIterator<Item = Vec<String>>) -> String {
    let mut out = String::from(header);
    out.push('\n');
    for r in rows {
        out.push_str(&r.iter().map(|f| csv_field(f)).collect::<Vec<_>>().join(","));
        out.push('\n');
    }
    out
}
