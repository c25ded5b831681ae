//! Verification reports and their JSON form.
//!
//! Keys are emitted sorted at every level and no floats appear anywhere, so
//! parsing a report and serializing it again reproduces it byte for byte.

use std::fmt;

use serde::{Deserialize, Serialize};
use serde_json::Value;

use crate::bundle::ManifoldSpec;

#[derive(Serialize, Deserialize, Clone, Copy, Debug, PartialEq, Eq)]
#[serde(rename_all = "lowercase")]
pub enum Status {
    Pass,
    Fail,
    /// Imported analytic input, not computed.
    Assumed,
}

impl fmt::Display for Status {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Status::Pass => "PASS",
            Status::Fail => "FAIL",
            Status::Assumed => "ASSUMED",
        })
    }
}

#[derive(Serialize, Deserialize, Clone, Debug, PartialEq)]
pub struct CheckResult {
    pub name: String,
    pub status: Status,
    pub details: String,
    pub certificate: Option<Value>,
}

impl CheckResult {
    pub fn new(name: &str, ok: bool, details: impl Into<String>, certificate: Option<Value>) -> Self {
        CheckResult { name: name.into(), status: if ok { Status::Pass } else { Status::Fail }, details: details.into(), certificate }
    }

    pub fn assumed(name: &str, details: impl Into<String>) -> Self {
        CheckResult { name: name.into(), status: Status::Assumed, details: details.into(), certificate: None }
    }

    /// A check that could not run.
    pub fn error(name: &str, err: impl fmt::Display) -> Self {
        CheckResult { name: name.into(), status: Status::Fail, details: format!("error: {err}"), certificate: None }
    }
}

#[derive(Serialize, Deserialize, Clone, Debug, PartialEq, Eq)]
pub struct SpecEcho {
    pub a: u32,
    pub b: u32,
    pub c: u32,
    pub lambda: String,
}

impl From<&ManifoldSpec> for SpecEcho {
    fn from(s: &ManifoldSpec) -> Self {
        SpecEcho { a: s.a(), b: s.b(), c: s.c(), lambda: s.lambda().to_string() }
    }
}

#[derive(Serialize, Deserialize, Clone, Copy, Debug, PartialEq, Eq, Default)]
pub struct Summary {
    pub pass: usize,
    pub fail: usize,
    pub assumed: usize,
}

#[derive(Serialize, Deserialize, Clone, Debug, PartialEq)]
pub struct Report {
    pub spec: Option<SpecEcho>,
    pub checks: Vec<CheckResult>,
    pub summary: Summary,
    pub version: String,
}

impl Report {
    pub fn new(spec: Option<&ManifoldSpec>, checks: Vec<CheckResult>) -> Self {
        let mut summary = Summary::default();
        for c in &checks {
            match c.status {
                Status::Pass => summary.pass += 1,
                Status::Fail => summary.fail += 1,
                Status::Assumed => summary.assumed += 1,
            }
        }
        Report { spec: spec.map(SpecEcho::from), checks, summary, version: env!("CARGO_PKG_VERSION").into() }
    }

    pub fn all_passed(&self) -> bool {
        self.summary.fail == 0
    }

    /// Summary counts agree with the check list.
    pub fn is_consistent(&self) -> bool {
        Report::new(None, self.checks.clone()).summary == self.summary
    }

    pub fn to_json(&self) -> String {
        let value = serde_json::to_value(self).expect("report serializes");
        serde_json::to_string_pretty(&value).expect("value serializes")
    }

    pub fn from_json(s: &str) -> serde_json::Result<Self> {
        serde_json::from_str(s)
    }
}

impl fmt::Display for Report {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if let Some(s) = &self.spec {
            writeln!(f, "a = {}, b = {}, c = {}, lambda = {}", s.a, s.b, s.c, s.lambda)?;
        }
        for c in &self.checks {
            writeln!(f, "[{:>7}] {}: {}", c.status.to_string(), c.name, c.details)?;
        }
        write!(f, "{} pass, {} fail, {} assumed", self.summary.pass, self.summary.fail, self.summary.assumed)
    }
}
