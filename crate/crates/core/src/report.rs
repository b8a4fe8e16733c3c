//! Machine-readable verification results.

use std::collections::BTreeMap;

use serde::Serialize;

pub const SCHEMA: &str = "1";

/// One identity checked over a sample set.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Check {
    pub name: String,
    pub samples: usize,
    pub max_residual: f64,
    pub tolerance: f64,
    pub passed: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub error: Option<String>,
}

impl Check {
    pub fn new(name: impl Into<String>, tolerance: f64) -> Self {
        Self { name: name.into(), samples: 0, max_residual: 0.0, tolerance, passed: true, error: None }
    }

    /// Records one residual; NaN fails the check.
    pub fn record(&mut self, residual: f64) {
        self.samples += 1;
        if residual.is_nan() {
            self.max_residual = f64::NAN;
            self.passed = false;
            return;
        }
        if !self.max_residual.is_nan() {
            self.max_residual = self.max_residual.max(residual);
        }
        if residual > self.tolerance {
            self.passed = false;
        }
    }

    /// Records a failed evaluation. Only the first message is kept.
    pub fn fail(&mut self, msg: impl std::fmt::Display) {
        self.samples += 1;
        self.passed = false;
        if self.error.is_none() {
            self.error = Some(msg.to_string());
        }
    }

    pub fn record_result<E: std::fmt::Display>(&mut self, r: Result<f64, E>) {
        match r {
            Ok(v) => self.record(v),
            Err(e) => self.fail(e),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct VerificationReport {
    pub schema: &'static str,
    pub suite: String,
    pub system: String,
    pub parameters: BTreeMap<String, f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
    pub checks: Vec<Check>,
    pub passed: bool,
}

impl VerificationReport {
    pub fn new(suite: impl Into<String>, system: impl Into<String>) -> Self {
        Self {
            schema: SCHEMA,
            suite: suite.into(),
            system: system.into(),
            parameters: BTreeMap::new(),
            seed: None,
            checks: Vec::new(),
            passed: true,
        }
    }

    pub fn param(mut self, key: &str, v: f64) -> Self {
        self.parameters.insert(key.into(), v);
        self
    }

    pub fn push(&mut self, c: Check) {
        self.passed &= c.passed;
        self.checks.push(c);
    }

    pub fn extend(&mut self, cs: impl IntoIterator<Item = Check>) {
        cs.into_iter().for_each(|c| self.push(c));
    }

    pub fn failures(&self) -> impl Iterator<Item = &Check> {
        self.checks.iter().filter(|c| !c.passed)
    }

    pub fn check(&self, name: &str) -> Option<&Check> {
        self.checks.iter().find(|c| c.name == name)
    }
}

/// `|a - b| / max(scale, 1e-300)`.
pub fn rel_residual(a: f64, b: f64, scale: f64) -> f64 {
    (a - b).abs() / scale.max(1e-300)
}
