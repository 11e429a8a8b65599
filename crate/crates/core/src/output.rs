//! Bit-stable text output.

use std::fmt::Write as _;
use std::path::Path;

use crate::error::Result;

/// 17 significant digits in scientific notation.
pub fn fmt_num(x: f64) -> String {
    if x == 0.0 {
        // Avoid "-0" in files.
        return format!("{:.16e}", 0.0);
    }
    format!("{x:.16e}")
}

/// Simple CSV table with LF line endings and an optional leading text
/// column.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct Table {
    pub columns: Vec<String>,
    pub rows: Vec<Vec<f64>>,
    pub label_column: Option<String>,
    pub labels: Vec<String>,
}

impl Table {
    pub fn new(columns: &[&str]) -> Self {
        Self {
            columns: columns.iter().map(|s| s.to_string()).collect(),
            rows: Vec::new(),
            label_column: None,
            labels: Vec::new(),
        }
    }

    pub fn labeled(label_column: &str, columns: &[&str]) -> Self {
        Self { label_column: Some(label_column.to_string()), ..Self::new(columns) }
    }

    pub fn push_labeled(&mut self, label: &str, row: Vec<f64>) {
        assert!(self.label_column.is_some(), "table has no label column");
        self.labels.push(label.to_string());
        self.push(row);
    }

    pub fn push(&mut self, row: Vec<f64>) {
        assert_eq!(row.len(), self.columns.len(), "row width mismatch");
        self.rows.push(row);
    }

    pub fn column(&self, name: &str) -> Option<Vec<f64>> {
        let i = self.columns.iter().position(|c| c == name)?;
        Some(self.rows.iter().map(|r| r[i]).collect())
    }

    pub fn to_csv(&self) -> String {
        let mut header: Vec<&str> = self.label_column.iter().map(|s| s.as_str()).collect();
        header.extend(self.columns.iter().map(|s| s.as_str()));
        let mut out = header.join(",");
        out.push('\n');
        for (i, row) in self.rows.iter().enumerate() {
            let mut cells: Vec<String> = self.labels.get(i).cloned().into_iter().collect();
            cells.extend(row.iter().map(|&x| fmt_num(x)));
            writeln!(out, "{}", cells.join(",")).unwrap();
        }
        out
    }

    pub fn write(&self, path: &Path) -> Result<()> {
        std::fs::write(path, self.to_csv())?;
        Ok(())
    }
}
