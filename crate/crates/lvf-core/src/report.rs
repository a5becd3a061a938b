//! Verification reports: a stable, deterministic record of what a suite
//! checked and what it found. Serialization is canonical JSON so two runs
//! with the same configuration and seed produce byte-identical output.

use serde::{Deserialize, Serialize};

pub const SCHEMA_VERSION: u32 = 1;

/// Fixed timestamp used unless the caller opts into wall-clock stamping;
/// reports must be byte-identical across runs by default.
pub const DETERMINISTIC_TIMESTAMP: &str = "1970-01-01T00:00:00Z";

/// Outcome of a single check.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", content = "detail")]
pub enum Status {
    Pass,
    Fail,
    Skipped(String),
}

impl Status {
    pub fn is_pass(&self) -> bool {
        matches!(self, Status::Pass)
    }

    pub fn is_fail(&self) -> bool {
        matches!(self, Status::Fail)
    }
}

/// One verified identity or property, with enough context to reproduce it.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CheckResult {
    pub name: String,
    pub status: Status,
    /// Index window the instance was built on, if any.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub window: Option<String>,
    /// Sub-window on which the identity was actually asserted.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub safe_window: Option<String>,
    /// Largest absolute deviation for float-mode checks.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub max_abs_error: Option<f64>,
    /// Mismatch witness or informational note, in canonical text form.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub witness: Option<String>,
}

impl CheckResult {
    pub fn pass(name: impl Into<String>) -> Self {
        CheckResult {
            name: name.into(),
            status: Status::Pass,
            window: None,
            safe_window: None,
            max_abs_error: None,
            witness: None,
        }
    }

    pub fn fail(name: impl Into<String>, witness: impl Into<String>) -> Self {
        CheckResult {
            name: name.into(),
            status: Status::Fail,
            window: None,
            safe_window: None,
            max_abs_error: None,
            witness: Some(witness.into()),
        }
    }

    pub fn skipped(name: impl Into<String>, reason: impl Into<String>) -> Self {
        CheckResult {
            name: name.into(),
            status: Status::Skipped(reason.into()),
            window: None,
            safe_window: None,
            max_abs_error: None,
            witness: None,
        }
    }

    /// Pass/fail from a boolean with a witness shown only on failure.
    pub fn assert(name: impl Into<String>, ok: bool, witness: impl FnOnce() -> String) -> Self {
        if ok {
            CheckResult::pass(name)
        } else {
            CheckResult::fail(name, witness())
        }
    }

    pub fn with_window(mut self, w: impl ToString) -> Self {
        self.window = Some(w.to_string());
        self
    }

    pub fn with_safe_window(mut self, w: impl ToString) -> Self {
        self.safe_window = Some(w.to_string());
        self
    }

    pub fn with_error(mut self, e: f64) -> Self {
        self.max_abs_error = Some(e);
        self
    }

    pub fn with_witness(mut self, w: impl Into<String>) -> Self {
        self.witness = Some(w.into());
        self
    }
}

/// A full suite report.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Report {
    pub schema_version: u32,
    pub suite: String,
    pub timestamp: String,
    /// Crate version, scalar mode, and build flavor; deterministic for a
    /// fixed build.
    pub environment: String,
    pub seed: u64,
    pub checks: Vec<CheckResult>,
}

impl Report {
    pub fn new(suite: impl Into<String>, seed: u64, mut checks: Vec<CheckResult>) -> Self {
        checks.sort_by(|a, b| a.name.cmp(&b.name));
        Report {
            schema_version: SCHEMA_VERSION,
            suite: suite.into(),
            timestamp: DETERMINISTIC_TIMESTAMP.to_string(),
            environment: environment_fingerprint(),
            seed,
            checks,
        }
    }

    pub fn all_passed(&self) -> bool {
        self.checks.iter().all(|c| !c.status.is_fail())
    }

    pub fn failures(&self) -> impl Iterator<Item = &CheckResult> {
        self.checks.iter().filter(|c| c.status.is_fail())
    }

    pub fn find(&self, name: &str) -> Option<&CheckResult> {
        self.checks.iter().find(|c| c.name == name)
    }

    /// Canonical serialized form: pretty JSON with struct-order keys and
    /// name-sorted checks.
    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serialization cannot fail")
    }
}

pub fn environment_fingerprint() -> String {
    let flavor = if cfg!(feature = "parallel") { "parallel" } else { "sequential" };
    format!(
        "lvf-core {} / {} / {}",
        env!("CARGO_PKG_VERSION"),
        std::env::consts::ARCH,
        flavor
    )
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn checks_are_sorted_and_json_is_stable() {
        let r1 = Report::new(
            "demo",
            7,
            vec![CheckResult::pass("b-check"), CheckResult::fail("a-check", "x != y")],
        );
        let r2 = Report::new(
            "demo",
            7,
            vec![CheckResult::fail("a-check", "x != y"), CheckResult::pass("b-check")],
        );
        assert_eq!(r1.to_json(), r2.to_json());
        assert_eq!(r1.checks[0].name, "a-check");
        assert!(!r1.all_passed());
    }

    #[test]
    fn round_trips_through_json() {
        let r = Report::new(
            "demo",
            3,
            vec![
                CheckResult::pass("ok").with_window("{1..4}").with_error(1e-12),
                CheckResult::skipped("later", "not configured"),
            ],
        );
        let back: Report = serde_json::from_str(&r.to_json()).unwrap();
        assert_eq!(back, r);
        assert_eq!(back.schema_version, SCHEMA_VERSION);
    }
}
