//! Deterministic CSV and JSON emission.
//!
//! Numbers are printed with 17 significant digits and a `.` decimal
//! separator, so files are bytewise reproducible across machines; golden-file
//! tests rely on that. CSV fields use RFC-4180-style quoting. JSON output is
//! a single object `{"config": …, "columns": […], "rows": [[…], …]}` with
//! insertion-ordered keys.

use std::fmt::Write as _;

#[derive(Clone, Copy, Debug, PartialEq, Eq, clap::ValueEnum)]
pub enum OutputFormat {
    Csv,
    Json,
}

#[derive(Clone, Debug, PartialEq)]
pub enum Cell {
    UInt(u64),
    Float(f64),
    Text(String),
    Empty,
}

impl From<num_bigint::BigUint> for Cell {
    fn from(v: num_bigint::BigUint) -> Self {
        match u64::try_from(&v) {
            Ok(small) => Cell::UInt(small),
            Err(_) => Cell::Text(v.to_string()),
        }
    }
}

/// One emitted record set: the echoed configuration plus fixed-schema rows.
#[derive(Clone, Debug)]
pub struct Table {
    pub command: &'static str,
    pub config: Vec<(&'static str, String)>,
    pub columns: Vec<&'static str>,
    pub rows: Vec<Vec<Cell>>,
}

impl Table {
    pub fn render(&self, format: OutputFormat) -> Vec<u8> {
        match format {
            OutputFormat::Csv => self.to_csv().into_bytes(),
            OutputFormat::Json => self.to_json().into_bytes(),
        }
    }

    fn to_csv(&self) -> String {
        let mut out = String::new();
        let _ = write!(out, "# hyperfpp {} {}", crate::version(), self.command);
        for (k, v) in &self.config {
            let _ = write!(out, " {k}={v}");
        }
        out.push('\n');
        out.push_str(&self.columns.join(","));
        out.push('\n');
        for row in &self.rows {
            debug_assert_eq!(row.len(), self.columns.len());
            for (i, cell) in row.iter().enumerate() {
                if i > 0 {
                    out.push(',');
                }
                out.push_str(&csv_field(cell));
            }
            out.push('\n');
        }
        out
    }

    fn to_json(&self) -> String {
        let mut out = String::new();
        out.push_str("{\"config\":{");
        let _ = write!(out, "\"version\":{}", json_string(crate::version()));
        let _ = write!(out, ",\"command\":{}", json_string(self.command));
        for (k, v) in &self.config {
            let _ = write!(out, ",{}:{}", json_string(k), json_string(v));
        }
        out.push_str("},\"columns\":[");
        for (i, c) in self.columns.iter().enumerate() {
            if i > 0 {
                out.push(',');
            }
            out.push_str(&json_string(c));
        }
        out.push_str("],\"rows\":[");
        for (i, row) in self.rows.iter().enumerate() {
            if i > 0 {
                out.push(',');
            }
            out.push('[');
            for (j, cell) in row.iter().enumerate() {
                if j > 0 {
                    out.push(',');
                }
                out.push_str(&json_cell(cell));
            }
            out.push(']');
        }
        out.push_str("]}\n");
        out
    }
}

/// 17 significant digits, enough to round-trip any f64.
pub fn fmt_float(v: f64) -> String {
    format!("{v:.16e}")
}

fn csv_field(cell: &Cell) -> String {
    let raw = match cell {
        Cell::UInt(v) => v.to_string(),
        Cell::Float(v) => fmt_float(*v),
        Cell::Text(s) => s.clone(),
        Cell::Empty => String::new(),
    };
    if raw.contains(',') || raw.contains('"') || raw.contains('\n') || raw.contains('\r') {
        format!("\"{}\"", raw.replace('"', "\"\""))
    } else {
        raw
    }
}

fn json_cell(cell: &Cell) -> String {
    match cell {
        Cell::UInt(v) => v.to_string(),
        Cell::Float(v) if v.is_finite() => fmt_float(*v),
        Cell::Float(_) => "null".into(),
        Cell::Text(s) => json_string(s),
        Cell::Empty => "null".into(),
    }
}

fn json_string(s: &str) -> String {
    let mut out = String::with_capacity(s.len() + 2);
    out.push('"');
    for ch in s.chars() {
        match ch {
            '"' => out.push_str("\\\""),
            '\\' => out.push_str("\\\\"),
            '\n' => out.push_str("\\n"),
            '\r' => out.push_str("\\r"),
            '\t' => out.push_str("\\t"),
            c if (c as u32) < 0x20 => {
                let _ = write!(out, "\\u{:04x}", c as u32);
            }
            c => out.push(c),
        }
    }
    out.push('"');
    out
}
