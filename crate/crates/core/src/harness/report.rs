//! Check records and their JSON/CSV serializations.

use serde::{Deserialize, Serialize};
use serde_json::Value;
use std::collections::BTreeMap;
use std::fmt::Write as _;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Status {
    Pass,
    Fail,
    /// Measured and reported, never counted as a failure.
    Diagnostic,
    /// The check raised; the message is in `error`.
    Error,
}

impl Status {
    pub fn as_str(self) -> &'static str {
        match self {
            Status::Pass => "pass",
            Status::Fail => "fail",
            Status::Diagnostic => "diagnostic",
            Status::Error => "error",
        }
    }

    pub fn is_hard_failure(self) -> bool {
        matches!(self, Status::Fail | Status::Error)
    }
}

/// One measured inequality or identity. `slack = rhs − lhs`; a graded record
/// passes iff `slack ≥ 0`. Identities are recorded as `lhs = discrepancy`,
/// `rhs = tolerance`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CheckRecord {
    pub name: String,
    pub reference: String,
    pub lhs: Option<f64>,
    pub rhs: Option<f64>,
    pub slack: Option<f64>,
    pub status: Status,
    pub params: BTreeMap<String, Value>,
    pub seed: Option<u64>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub runtime_ms: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub error: Option<String>,
}

impl CheckRecord {
    fn base(name: &str, reference: &str, lhs: f64, rhs: f64, status: Status) -> Self {
        CheckRecord {
            name: name.to_string(),
            reference: reference.to_string(),
            lhs: Some(lhs),
            rhs: Some(rhs),
            slack: Some(rhs - lhs),
            status,
            params: BTreeMap::new(),
            seed: None,
            runtime_ms: None,
            error: None,
        }
    }

    /// Graded `lhs ≤ rhs`.
    pub fn graded(name: &str, reference: &str, lhs: f64, rhs: f64) -> Self {
        let pass = rhs - lhs >= 0.0;
        Self::base(name, reference, lhs, rhs, if pass { Status::Pass } else { Status::Fail })
    }

    /// Graded `discrepancy ≤ tol`.
    pub fn identity(name: &str, reference: &str, discrepancy: f64, tol: f64) -> Self {
        Self::graded(name, reference, discrepancy, tol)
    }

    pub fn diagnostic(name: &str, reference: &str, lhs: f64, rhs: f64) -> Self {
        Self::base(name, reference, lhs, rhs, Status::Diagnostic)
    }

    pub fn error(name: &str, reference: &str, msg: String) -> Self {
        CheckRecord {
            name: name.to_string(),
            reference: reference.to_string(),
            lhs: None,
            rhs: None,
            slack: None,
            status: Status::Error,
            params: BTreeMap::new(),
            seed: None,
            runtime_ms: None,
            error: Some(msg),
        }
    }

    pub fn with(mut self, key: &str, value: impl Into<Value>) -> Self {
        self.params.insert(key.to_string(), value.into());
        self
    }

    pub fn with_seed(mut self, seed: u64) -> Self {
        self.seed = Some(seed);
        self
    }
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct VerificationReport {
    pub records: Vec<CheckRecord>,
}

impl VerificationReport {
    pub fn hard_failures(&self) -> usize {
        self.records.iter().filter(|r| r.status.is_hard_failure()).count()
    }

    pub fn count(&self, status: Status) -> usize {
        self.records.iter().filter(|r| r.status == status).count()
    }

    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(&self.records).expect("records serialize");
        s.push('\n');
        s
    }

    /// `name,pass,slack`, one row per record.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("name,pass,slack\n");
        for r in &self.records {
            let slack = r.slack.map(|s| s.to_string()).unwrap_or_default();
            writeln!(out, "{},{},{}", r.name, r.status.as_str(), slack).unwrap();
        }
        out
    }
}
