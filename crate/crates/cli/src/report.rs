//! Rendering as an aligned table, CSV or JSON lines.
//!
//! Rationals are always written exactly as `num/den`, with a decimal
//! rendering alongside for reading.

use crate::error::{CliError, Result};
use apportion_core::rational::{self, Rational};
use serde::{Deserialize, Serialize};

pub const PLACES: usize = 6;

#[derive(Clone, Copy, Debug, PartialEq, Eq, clap::ValueEnum)]
pub enum Format {
    Table,
    Csv,
    JsonLines,
}

pub fn exact(x: &Rational) -> String {
    rational::format_exact(x)
}

pub fn decimal(x: &Rational, places: usize) -> String {
    rational::format_decimal(x, places)
}

/// One command's output. `meta` and `rows` feed the table and CSV forms,
/// `records` the JSON-lines form.
#[derive(Clone, Debug, Default)]
pub struct Document {
    pub meta: Vec<(String, String)>,
    pub columns: Vec<String>,
    pub rows: Vec<Vec<String>>,
    pub records: Vec<serde_json::Value>,
}

impl Document {
    pub fn new(columns: &[&str]) -> Self {
        Document {
            columns: columns.iter().map(|c| c.to_string()).collect(),
            ..Document::default()
        }
    }

    pub fn meta(&mut self, key: &str, value: impl ToString) {
        self.meta.push((key.into(), value.to_string()));
    }

    pub fn row(&mut self, cells: Vec<String>) {
        debug_assert_eq!(cells.len(), self.columns.len());
        self.rows.push(cells);
    }

    /// Appends `{"record": kind, ...value}`.
    pub fn record<T: Serialize>(&mut self, kind: &str, value: &T) {
        let mut v = serde_json::to_value(value).expect("serializable record");
        match &mut v {
            serde_json::Value::Object(map) => {
                map.insert("record".into(), kind.into());
            }
            other => {
                let inner = std::mem::take(other);
                *other = serde_json::json!({ "record": kind, "value": inner });
            }
        }
        self.records.push(v);
    }

    pub fn render(&self, format: Format) -> String {
        match format {
            Format::Table => self.table(),
            Format::Csv => self.csv(),
            Format::JsonLines => self
                .records
                .iter()
                .map(|r| format!("{r}\n"))
                .collect(),
        }
    }

    fn table(&self) -> String {
        let mut out = String::new();
        let key_width = self.meta.iter().map(|(k, _)| k.chars().count()).max().unwrap_or(0);
        for (k, v) in &self.meta {
            out.push_str(&format!("{k:<key_width$}  {v}\n"));
        }
        if self.columns.is_empty() {
            return out;
        }
        if !self.meta.is_empty() {
            out.push('\n');
        }
        let mut widths: Vec<usize> = self.columns.iter().map(|c| c.chars().count()).collect();
        for row in &self.rows {
            for (w, cell) in widths.iter_mut().zip(row) {
                *w = (*w).max(cell.chars().count());
            }
        }
        let line = |cells: &[String]| -> String {
            let padded: Vec<String> = cells
                .iter()
                .zip(&widths)
                .map(|(c, &w)| format!("{c:<w$}"))
                .collect();
            format!("{}\n", padded.join("  ").trim_end())
        };
        out.push_str(&line(&self.columns));
        for row in &self.rows {
            out.push_str(&line(row));
        }
        out
    }

    fn csv(&self) -> String {
        let mut w = csv::Writer::from_writer(Vec::new());
        w.write_record(&self.columns).expect("in-memory write");
        for row in &self.rows {
            w.write_record(row).expect("in-memory write");
        }
        String::from_utf8(w.into_inner().expect("in-memory write")).expect("utf-8")
    }
}

/// One state's line of an allocation report.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct AllocationRow {
    pub state: String,
    pub population: u64,
    #[serde(with = "rational::serde_rational")]
    pub quota: Rational,
    pub quota_decimal: String,
    pub seats: u64,
}

impl AllocationRow {
    pub const COLUMNS: [&'static str; 5] = ["state", "population", "quota", "quota_decimal", "seats"];

    pub fn cells(&self) -> Vec<String> {
        vec![
            self.state.clone(),
            self.population.to_string(),
            exact(&self.quota),
            self.quota_decimal.clone(),
            self.seats.to_string(),
        ]
    }
}

pub fn parse_allocation_csv(text: &str) -> Result<Vec<AllocationRow>> {
    csv::Reader::from_reader(text.as_bytes())
        .deserialize()
        .map(|r| r.map_err(|e| CliError::Input(format!("allocation csv: {e}"))))
        .collect()
}

/// The `allocation` records of a JSON-lines report.
pub fn parse_allocation_json_lines(text: &str) -> Result<Vec<AllocationRow>> {
    let mut rows = Vec::new();
    for (k, line) in text.lines().enumerate() {
        let v: serde_json::Value = serde_json::from_str(line).map_err(|e| CliError::Parse {
            line: k as u64 + 1,
            message: e.to_string(),
        })?;
        if v.get("record").and_then(|r| r.as_str()) == Some("allocation") {
            rows.push(serde_json::from_value(v).map_err(|e| CliError::Parse {
                line: k as u64 + 1,
                message: e.to_string(),
            })?);
        }
    }
    Ok(rows)
}
