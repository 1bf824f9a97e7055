//! Structured results for identity checks.
//!
//! Every verification routine returns a report listing each named check
//! with a pass/fail/skipped status and, on failure, the locations and
//! witnesses that broke it. Witnesses are rendered to text so a report is
//! self-contained.

use alloc::string::String;
use alloc::vec::Vec;
use core::fmt;

/// Outcome of a single named check.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum CheckStatus {
    Pass,
    Fail,
    /// Not run because a prerequisite failed or the check does not apply.
    Skipped,
}

/// One concrete place where a check broke, with a printed witness.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Failure {
    /// Index combination or sample point, e.g. `"alpha=1 beta=2 gamma=0"`.
    pub location: String,
    /// The residual or mismatch, rendered to text.
    pub witness: String,
}

impl Failure {
    pub fn new(location: impl Into<String>, witness: impl Into<String>) -> Self {
        Failure {
            location: location.into(),
            witness: witness.into(),
        }
    }
}

/// A named check together with its outcome.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct CheckResult {
    pub id: &'static str,
    pub status: CheckStatus,
    pub failures: Vec<Failure>,
}

impl CheckResult {
    pub fn pass(id: &'static str) -> Self {
        CheckResult {
            id,
            status: CheckStatus::Pass,
            failures: Vec::new(),
        }
    }

    pub fn skipped(id: &'static str) -> Self {
        CheckResult {
            id,
            status: CheckStatus::Skipped,
            failures: Vec::new(),
        }
    }

    pub fn from_failures(id: &'static str, failures: Vec<Failure>) -> Self {
        let status = if failures.is_empty() {
            CheckStatus::Pass
        } else {
            CheckStatus::Fail
        };
        CheckResult {
            id,
            status,
            failures,
        }
    }

    pub fn passed(&self) -> bool {
        self.status == CheckStatus::Pass
    }
}

/// An ordered collection of check results.
#[derive(Clone, PartialEq, Eq, Debug, Default)]
pub struct CheckReport {
    pub checks: Vec<CheckResult>,
}

impl CheckReport {
    pub fn new() -> Self {
        CheckReport { checks: Vec::new() }
    }

    pub fn push(&mut self, result: CheckResult) {
        self.checks.push(result);
    }

    pub fn find(&self, id: &str) -> Option<&CheckResult> {
        self.checks.iter().find(|c| c.id == id)
    }

    /// True when no check failed (skips do not count as failures).
    pub fn all_passed(&self) -> bool {
        self.checks.iter().all(|c| c.status != CheckStatus::Fail)
    }
}

impl fmt::Display for CheckReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for c in &self.checks {
            let tag = match c.status {
                CheckStatus::Pass => "PASS",
                CheckStatus::Fail => "FAIL",
                CheckStatus::Skipped => "SKIP",
            };
            writeln!(f, "{tag} {}", c.id)?;
            for fail in &c.failures {
                writeln!(f, "     at {}: {}", fail.location, fail.witness)?;
            }
        }
        Ok(())
    }
}
