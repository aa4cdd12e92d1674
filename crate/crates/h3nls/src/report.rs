//! JSON verdict and summary schema shared by the check subcommands.

use serde::Serialize;

pub const SCHEMA_VERSION: u32 = 1;

/// Outcome of one named inequality/identity check.
#[derive(Debug, Clone, Serialize)]
pub struct Verdict {
    pub check: String,
    pub lhs: f64,
    pub rhs: f64,
    pub constant: f64,
    pub pass: bool,
}

impl Verdict {
    pub fn new(check: impl Into<String>, lhs: f64, rhs: f64, constant: f64, pass: bool) -> Self {
        Verdict { check: check.into(), lhs, rhs, constant, pass }
    }
}

/// Top-level summary emitted by every scenario run.
#[derive(Debug, Clone, Serialize)]
pub struct ScenarioSummary<T: Serialize> {
    pub schema_version: u32,
    pub scenario: String,
    pub seed: u64,
    pub pass: bool,
    pub payload: T,
    /// Wall-clock runtime; excluded from byte-identity comparisons.
    pub runtime_seconds: f64,
}

impl<T: Serialize> ScenarioSummary<T> {
    pub fn new(scenario: impl Into<String>, seed: u64, pass: bool, payload: T) -> Self {
        ScenarioSummary {
            schema_version: SCHEMA_VERSION,
            scenario: scenario.into(),
            seed,
            pass,
            payload,
            runtime_seconds: 0.0,
        }
    }

    pub fn with_runtime(mut self, seconds: f64) -> Self {
        self.runtime_seconds = seconds;
        self
    }
}
