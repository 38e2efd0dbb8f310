//! Check reports: one record per verified identity, emitted as JSON and CSV.

use std::collections::BTreeMap;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CheckReport {
    pub check: String,
    /// `[re, im]`
    pub lhs: [f64; 2],
    pub rhs: [f64; 2],
    /// Combined standard error of `lhs - rhs`; 0 for deterministic checks.
    pub stderr: f64,
    pub pass: bool,
    /// Check-specific diagnostics (residuals, tolerances, sample counts).
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    pub extra: BTreeMap<String, f64>,
}

impl CheckReport {
    pub fn new(check: impl Into<String>, lhs: Complex64, rhs: Complex64, stderr: f64, pass: bool) -> Self {
        Self {
            check: check.into(),
            lhs: [lhs.re, lhs.im],
            rhs: [rhs.re, rhs.im],
            stderr,
            pass,
            extra: BTreeMap::new(),
        }
    }

    /// A deterministic residual check: `lhs` carries the residual, `rhs` the bound.
    pub fn residual(check: impl Into<String>, residual: f64, tol: f64) -> Self {
        Self::new(
            check,
            Complex64::new(residual, 0.0),
            Complex64::new(tol, 0.0),
            0.0,
            residual <= tol,
        )
        .with("residual", residual)
        .with("tol", tol)
    }

    pub fn with(mut self, key: &str, value: f64) -> Self {
        self.extra.insert(key.to_string(), value);
        self
    }

    pub fn lhs(&self) -> Complex64 {
        Complex64::new(self.lhs[0], self.lhs[1])
    }

    pub fn rhs(&self) -> Complex64 {
        Complex64::new(self.rhs[0], self.rhs[1])
    }

    pub fn diff(&self) -> Complex64 {
        self.lhs() - self.rhs()
    }

    pub fn get(&self, key: &str) -> Option<f64> {
        self.extra.get(key).copied()
    }
}

#[derive(Serialize)]
struct CsvRow<'a> {
    check: &'a str,
    lhs_re: f64,
    lhs_im: f64,
    rhs_re: f64,
    rhs_im: f64,
    diff_re: f64,
    diff_im: f64,
    stderr: f64,
    pass: bool,
}

pub fn to_json(reports: &[CheckReport]) -> Result<String> {
    serde_json::to_string_pretty(reports).map_err(|e| Error::Usage(format!("serializing report: {e}")))
}

pub fn to_csv(reports: &[CheckReport]) -> Result<String> {
    let mut w = csv::Writer::from_writer(Vec::new());
    let err = |e: csv::Error| Error::Usage(format!("writing csv: {e}"));
    if reports.is_empty() {
        return Ok(String::new());
    }
    for r in reports {
        let d = r.diff();
        w.serialize(CsvRow {
            check: &r.check,
            lhs_re: r.lhs[0],
            lhs_im: r.lhs[1],
            rhs_re: r.rhs[0],
            rhs_im: r.rhs[1],
            diff_re: d.re,
            diff_im: d.im,
            stderr: r.stderr,
            pass: r.pass,
        })
        .map_err(err)?;
    }
    let bytes = w.into_inner().map_err(|e| Error::Usage(format!("writing csv: {e}")))?;
    String::from_utf8(bytes).map_err(|e| Error::Usage(e.to_string()))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn json_roundtrip_and_csv_columns() {
        let r = CheckReport::new("demo", Complex64::new(1.0, 0.5), Complex64::new(1.0, 0.5), 0.0, true).with("n", 10.0);
        let json = to_json(std::slice::from_ref(&r)).unwrap();
        let back: Vec<CheckReport> = serde_json::from_str(&json).unwrap();
        assert_eq!(back, vec![r.clone()]);
        let csv = to_csv(&[r]).unwrap();
        let mut lines = csv.lines();
        assert_eq!(
            lines.next().unwrap(),
            "check,lhs_re,lhs_im,rhs_re,rhs_im,diff_re,diff_im,stderr,pass"
        );
        assert_eq!(lines.next().unwrap(), "demo,1.0,0.5,1.0,0.5,0.0,0.0,0.0,true");
    }

    #[test]
    fn residual_reports_gate_on_tolerance() {
        assert!(CheckReport::residual("r", 1e-13, 1e-12).pass);
        assert!(!CheckReport::residual("r", 1e-11, 1e-12).pass);
        assert_eq!(to_csv(&[]).unwrap(), "");
    }
}
