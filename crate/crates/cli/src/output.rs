//! Rendering of command results as text, JSON or CSV.

use serde_json::Value;

#[derive(Clone, Copy, Debug, PartialEq, Eq, clap::ValueEnum)]
pub enum Format {
    Text,
    Json,
    Csv,
}

/// One command result in all three renderings.
pub struct Report {
    pub text: String,
    pub json: Value,
    pub header: Vec<String>,
    pub rows: Vec<Vec<String>>,
    /// Set when a check ran to completion but did not hold.
    pub failed: bool,
}

impl Report {
    pub fn new(text: impl Into<String>, json: Value) -> Self {
        Report { text: text.into(), json, header: Vec::new(), rows: Vec::new(), failed: false }
    }

    pub fn table(mut self, header: &[&str], rows: Vec<Vec<String>>) -> Self {
        self.header = header.iter().map(|s| s.to_string()).collect();
        self.rows = rows;
        self
    }

    pub fn failed(mut self, failed: bool) -> Self {
        self.failed = failed;
        self
    }

    pub fn render(&self, format: Format) -> String {
        match format {
            Format::Text => {
                let mut s = self.text.clone();
                if !s.ends_with('\n') {
                    s.push('\n');
                }
                s
            }
            Format::Json => {
                let mut s = serde_json::to_string_pretty(&self.json).expect("json values serialize");
                s.push('\n');
                s
            }
            Format::Csv => {
                let (header, rows) = if self.header.is_empty() {
                    (vec!["result".to_string()], vec![vec![self.text.trim_end().to_string()]])
                } else {
                    (self.header.clone(), self.rows.clone())
                };
                let mut w = csv::WriterBuilder::new().quote_style(csv::QuoteStyle::NonNumeric).from_writer(Vec::new());
                w.write_record(&header).expect("in-memory write");
                for r in &rows {
                    w.write_record(r).expect("in-memory write");
                }
                String::from_utf8(w.into_inner().expect("in-memory flush")).expect("utf-8 input")
            }
        }
    }
}
