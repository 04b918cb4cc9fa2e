//! Verification reports and trajectory CSV.

use std::fmt::Write as _;

use liouville_core::flow::Trajectory;
use liouville_core::liouville::Certificate;
use liouville_core::ZeroTest;
use serde::{Deserialize, Serialize};

use crate::file::{form_to_terms, FormTerm};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CertificateRecord {
    pub name: String,
    pub verdict: String,
    pub certainty: String,
    /// Present only for failed checks.
    pub residual: Option<Vec<FormTerm>>,
    pub note: Option<String>,
}

impl From<&Certificate> for CertificateRecord {
    fn from(c: &Certificate) -> Self {
        CertificateRecord {
            name: c.name.clone(),
            verdict: c.verdict().to_string(),
            certainty: c.certainty.as_str().to_string(),
            residual: if c.passed { None } else { c.residual.as_ref().map(form_to_terms) },
            note: c.note.clone(),
        }
    }
}

/// A numeric quantity, optionally checked against an upper bound.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Diagnostic {
    pub name: String,
    pub value: f64,
    pub bound: Option<f64>,
    pub passed: bool,
}

impl Diagnostic {
    pub fn new(name: &str, value: f64, bound: f64) -> Diagnostic {
        Diagnostic { name: name.to_string(), value, bound: Some(bound), passed: value.is_finite() && value <= bound }
    }

    pub fn info(name: &str, value: f64) -> Diagnostic {
        Diagnostic { name: name.to_string(), value, bound: None, passed: value.is_finite() }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ZeroTestConfig {
    pub seed: u64,
    pub points: usize,
    pub tolerance: f64,
}

impl From<&ZeroTest> for ZeroTestConfig {
    fn from(zt: &ZeroTest) -> Self {
        ZeroTestConfig { seed: zt.seed, points: zt.points, tolerance: zt.tolerance }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Report {
    pub version: String,
    pub system: String,
    pub certificates: Vec<CertificateRecord>,
    pub diagnostics: Vec<Diagnostic>,
    pub zero_test: ZeroTestConfig,
    pub overall: String,
}

impl Report {
    pub fn new(system: &str, zt: &ZeroTest) -> Report {
        Report {
            version: env!("CARGO_PKG_VERSION").to_string(),
            system: system.to_string(),
            certificates: Vec::new(),
            diagnostics: Vec::new(),
            zero_test: zt.into(),
            overall: "PASS".to_string(),
        }
    }

    pub fn push(&mut self, c: &Certificate) {
        self.certificates.push(c.into());
        self.refresh();
    }

    pub fn push_diagnostic(&mut self, d: Diagnostic) {
        self.diagnostics.push(d);
        self.refresh();
    }

    fn refresh(&mut self) {
        let ok = self.certificates.iter().all(|c| c.verdict == "PASS") && self.diagnostics.iter().all(|d| d.passed);
        self.overall = if ok { "PASS" } else { "FAIL" }.to_string();
    }

    pub fn passed(&self) -> bool {
        self.overall == "PASS"
    }

    pub fn exit_code(&self) -> i32 {
        if self.passed() {
            0
        } else {
            1
        }
    }

    pub fn certificate(&self, name: &str) -> Option<&CertificateRecord> {
        self.certificates.iter().find(|c| c.name == name)
    }

    pub fn to_json(&self) -> String {
        let mut text = serde_json::to_string_pretty(self).expect("plain data");
        text.push('\n');
        text
    }
}

/// `s,x0,…,x{n-1}[,det]`, one row per sample, 17 significant digits.
pub fn trajectory_csv(traj: &Trajectory, determinants: Option<&[f64]>) -> String {
    let n = traj.states.first().map_or(0, Vec::len);
    let mut out = String::from("s");
    for i in 0..n {
        write!(out, ",x{i}").unwrap();
    }
    if determinants.is_some() {
        out.push_str(",det");
    }
    out.push('\n');
    for (j, (s, x)) in traj.s.iter().zip(&traj.states).enumerate() {
        write!(out, "{s:.16e}").unwrap();
        for v in x {
            write!(out, ",{v:.16e}").unwrap();
        }
        if let Some(d) = determinants {
            write!(out, ",{:.16e}", d[j]).unwrap();
        }
        out.push('\n');
    }
    out
}
