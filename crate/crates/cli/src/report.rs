//! Reports: a table of per-case rows plus a pass/fail summary, written as
//! CSV or JSON with a separate summary JSON file.

use std::fs;
use std::io;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use crate::config::Format;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum Cell {
    Int(i64),
    Float(f64),
    Bool(bool),
    Text(String),
}

impl Cell {
    /// Non-finite floats become text so the JSON form stays parseable.
    pub fn float(x: f64) -> Self {
        if x.is_finite() {
            Self::Float(x)
        } else {
            Self::Text(format!("{x}"))
        }
    }

    pub fn int(n: usize) -> Self {
        Self::Int(n as i64)
    }

    pub fn text(s: impl Into<String>) -> Self {
        Self::Text(s.into())
    }

    /// CSV field. Floats carry 17 significant digits.
    pub fn to_csv(&self) -> String {
        match self {
            Self::Int(n) => n.to_string(),
            Self::Float(x) => format!("{x:.16e}"),
            Self::Bool(b) => b.to_string(),
            Self::Text(s) if s.contains([',', '"', '\n']) => format!("\"{}\"", s.replace('"', "\"\"")),
            Self::Text(s) => s.clone(),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Summary {
    pub cases: usize,
    pub passed: usize,
    pub failed: usize,
    /// Largest value in the report's error column.
    pub max_error: f64,
    /// Fitted convergence orders by case, when the command produces them.
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub fitted_orders: Vec<(String, f64)>,
    pub status: String,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Report {
    pub command: String,
    pub seed: u64,
    pub columns: Vec<String>,
    pub rows: Vec<Vec<Cell>>,
    pub summary: Summary,
}

impl Report {
    /// Builds the summary from the boolean `pass` column and the float
    /// column named `error_column`.
    pub fn new(command: &str, seed: u64, columns: &[&str], rows: Vec<Vec<Cell>>, error_column: &str) -> Self {
        let pass_at = columns.iter().position(|c| *c == "pass").expect("report has a pass column");
        let err_at = columns.iter().position(|c| *c == error_column).expect("error column exists");
        let passed = rows.iter().filter(|r| r[pass_at] == Cell::Bool(true)).count();
        let max_error = rows
            .iter()
            .filter_map(|r| match r[err_at] {
                Cell::Float(x) => Some(x),
                _ => None,
            })
            .fold(0.0, f64::max);
        let failed = rows.len() - passed;
        Self {
            command: command.into(),
            seed,
            columns: columns.iter().map(|c| c.to_string()).collect(),
            summary: Summary {
                cases: rows.len(),
                passed,
                failed,
                max_error,
                fitted_orders: Vec::new(),
                status: if failed == 0 { "pass" } else { "fail" }.into(),
            },
            rows,
        }
    }

    pub fn with_fitted_orders(mut self, orders: Vec<(String, f64)>) -> Self {
        self.summary.fitted_orders = orders;
        self
    }

    pub fn passed(&self) -> bool {
        self.summary.failed == 0
    }

    pub fn to_csv(&self) -> String {
        let mut out = self.columns.join(",");
        out.push('\n');
        for row in &self.rows {
            let fields: Vec<String> = row.iter().map(Cell::to_csv).collect();
            out.push_str(&fields.join(","));
            out.push('\n');
        }
        out
    }

    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("report serializes");
        s.push('\n');
        s
    }

    pub fn summary_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(&self.summary).expect("summary serializes");
        s.push('\n');
        s
    }
}

/// Writes `<command>.csv` or `<command>.json` and `<command>.summary.json`
/// into `dir`, creating it if needed. Returns the paths written.
pub fn emit_report(report: &Report, format: Format, dir: &Path) -> io::Result<Vec<PathBuf>> {
    fs::create_dir_all(dir)?;
    let (ext, body) = match format {
        Format::Csv => ("csv", report.to_csv()),
        Format::Json => ("json", report.to_json()),
    };
    let main = dir.join(format!("{}.{ext}", report.command));
    let summary = dir.join(format!("{}.summary.json", report.command));
    fs::write(&main, body)?;
    fs::write(&summary, report.summary_json())?;
    Ok(vec![main, summary])
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sample() -> Report {
        let rows = vec![
            vec![Cell::text("a,b"), Cell::float(0.1), Cell::float(-0.0), Cell::Bool(true)],
            vec![Cell::text("c"), Cell::float(1.0 / 3.0), Cell::float(f64::INFINITY), Cell::Bool(false)],
        ];
        Report::new("demo", 7, &["case", "error", "other", "pass"], rows, "error")
    }

    #[test]
    fn empty_report_is_header_only_csv() {
        let r = Report::new("demo", 1, &["case", "error", "pass"], Vec::new(), "error");
        assert_eq!(r.to_csv(), "case,error,pass\n");
        assert!(r.passed());
        assert_eq!(r.summary.cases, 0);
    }

    #[test]
    fn summary_counts_and_status() {
        let r = sample();
        assert_eq!((r.summary.passed, r.summary.failed), (1, 1));
        assert_eq!(r.summary.status, "fail");
        assert_eq!(r.summary.max_error, 1.0 / 3.0);
    }

    #[test]
    fn csv_floats_have_seventeen_digits_and_round_trip() {
        let csv = sample().to_csv();
        let line = csv.lines().nth(2).unwrap();
        let field = line.split(',').nth(1).unwrap();
        assert_eq!(field, "3.3333333333333331e-1");
        assert_eq!(field.parse::<f64>().unwrap(), 1.0 / 3.0);
        assert!(csv.contains("\"a,b\""));
        assert!(csv.contains("inf"));
    }

    #[test]
    fn json_round_trip_is_equal() {
        let r = sample();
        let back: Report = serde_json::from_str(&r.to_json()).unwrap();
        assert_eq!(back, r);
        assert!(back.rows[0][2] == Cell::Float(-0.0) && matches!(back.rows[0][2], Cell::Float(x) if x.is_sign_negative()));
    }

    #[test]
    fn both_formats_carry_identical_numbers() {
        let r = sample();
        let json: Report = serde_json::from_str(&r.to_json()).unwrap();
        let csv = r.to_csv();
        for (row, line) in json.rows.iter().zip(csv.lines().skip(1)) {
            if let Cell::Float(x) = row[1] {
                let from_csv: f64 = line.rsplit(',').nth(2).unwrap().parse().unwrap();
                assert_eq!(x.to_bits(), from_csv.to_bits());
            }
        }
    }

    #[test]
    fn emit_writes_report_and_summary() {
        let dir = tempfile::tempdir().unwrap();
        let paths = emit_report(&sample(), Format::Json, dir.path()).unwrap();
        assert_eq!(paths.len(), 2);
        let summary: Summary = serde_json::from_str(&fs::read_to_string(&paths[1]).unwrap()).unwrap();
        assert_eq!(summary, sample().summary);
    }
}
