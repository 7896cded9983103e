//! Tabular parameter scans and their CSV rendering.

use std::fmt::Write as _;

use serde::Serialize;

use crate::error::{Error, Result};

/// A parameter sweep: the first column is the swept parameter.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ScanResult {
    parameter_name: String,
    columns: Vec<String>,
    rows: Vec<Vec<f64>>,
}

impl ScanResult {
    pub fn new(columns: &[&str], rows: Vec<Vec<f64>>) -> Result<Self> {
        if columns.is_empty() {
            return Err(Error::InvalidParameter("scan needs at least one column".into()));
        }
        for row in &rows {
            if row.len() != columns.len() {
                return Err(Error::DimensionMismatch {
                    expected: columns.len(),
                    found: row.len(),
                });
            }
        }
        if rows.windows(2).any(|w| !(w[1][0] > w[0][0])) {
            return Err(Error::InvalidParameter("scan parameter must be strictly increasing".into()));
        }
        Ok(Self {
            parameter_name: columns[0].to_string(),
            columns: columns.iter().map(|c| c.to_string()).collect(),
            rows,
        })
    }

    pub fn parameter_name(&self) -> &str {
        &self.parameter_name
    }

    pub fn columns(&self) -> &[String] {
        &self.columns
    }

    pub fn rows(&self) -> &[Vec<f64>] {
        &self.rows
    }

    pub fn len(&self) -> usize {
        self.rows.len()
    }

    pub fn is_empty(&self) -> bool {
        self.rows.is_empty()
    }

    /// Values of one named column.
    pub fn column(&self, name: &str) -> Option<Vec<f64>> {
        let k = self.columns.iter().position(|c| c == name)?;
        Some(self.rows.iter().map(|r| r[k]).collect())
    }

    /// CSV text: `#` metadata lines, one header row, then data rows with
    /// 12 significant digits.
    pub fn to_csv(&self, metadata: &[String]) -> String {
        let mut out = String::new();
        for line in metadata {
            let _ = writeln!(out, "# {line}");
        }
        let _ = writeln!(out, "{}", self.columns.join(","));
        for row in &self.rows {
            let cells: Vec<String> = row.iter().map(|&x| format_sig(x)).collect();
            let _ = writeln!(out, "{}", cells.join(","));
        }
        out
    }
}

/// `steps` evenly spaced points from `min` to `max` inclusive.
pub fn linspace(min: f64, max: f64, steps: usize) -> Result<Vec<f64>> {
    if steps < 2 {
        return Err(Error::TooFewSteps(steps));
    }
    if !min.is_finite() || !max.is_finite() || !(max > min) {
        return Err(Error::InvalidParameter(format!(
            "scan range must be finite with max > min, got [{min}, {max}]"
        )));
    }
    let h = (max - min) / (steps - 1) as f64;
    Ok((0..steps)
        .map(|i| if i + 1 == steps { max } else { min + h * i as f64 })
        .collect())
}

/// Formats with 12 significant digits, `%g` style: fixed notation for
/// moderate exponents, scientific otherwise, trailing zeros trimmed.
pub fn format_sig(x: f64) -> String {
    const SIG: i32 = 12;
    if x == 0.0 {
        return "0".to_string();
    }
    if !x.is_finite() {
        return format!("{x}");
    }
    let sci = format!("{:.*e}", (SIG - 1) as usize, x);
    let (mantissa, exp) = sci.split_once('e').expect("exponent marker");
    let exp: i32 = exp.parse().expect("integer exponent");
    if (-5..SIG).contains(&exp) {
        let decimals = (SIG - 1 - exp).max(0) as usize;
        trim_zeros(format!("{x:.decimals$}"))
    } else {
        format!("{}e{exp}", trim_zeros(mantissa.to_string()))
    }
}

fn trim_zeros(s: String) -> String {
    if s.contains('.') {
        s.trim_end_matches('0').trim_end_matches('.').to_string()
    } else {
        s
    }
}
