//! Pass/fail reporting for the verification suites.

use serde::Serialize;

/// One named check with an optional human-readable detail or witness.
#[derive(Clone, Debug, Serialize)]
pub struct Check {
    pub name: String,
    pub passed: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub detail: Option<String>,
}

impl Check {
    pub fn pass(name: impl Into<String>) -> Self {
        Check {
            name: name.into(),
            passed: true,
            detail: None,
        }
    }

    pub fn pass_with(name: impl Into<String>, detail: impl Into<String>) -> Self {
        Check {
            name: name.into(),
            passed: true,
            detail: Some(detail.into()),
        }
    }

    pub fn fail(name: impl Into<String>, detail: impl Into<String>) -> Self {
        Check {
            name: name.into(),
            passed: false,
            detail: Some(detail.into()),
        }
    }

    pub fn from_result(name: impl Into<String>, passed: bool, detail: impl Into<String>) -> Self {
        if passed {
            Check::pass_with(name, detail)
        } else {
            Check::fail(name, detail)
        }
    }
}

/// A named collection of checks, e.g. one verification suite run.
#[derive(Clone, Debug, Serialize)]
pub struct SuiteReport {
    pub suite: String,
    pub checks: Vec<Check>,
}

impl SuiteReport {
    pub fn new(suite: impl Into<String>) -> Self {
        SuiteReport {
            suite: suite.into(),
            checks: Vec::new(),
        }
    }

    pub fn push(&mut self, check: Check) {
        self.checks.push(check);
    }

    pub fn merge(&mut self, other: SuiteReport) {
        self.checks.extend(other.checks);
    }

    /// Whether every check passed.
    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }

    pub fn failures(&self) -> impl Iterator<Item = &Check> {
        self.checks.iter().filter(|c| !c.passed)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn report_aggregation() {
        let mut r = SuiteReport::new("demo");
        r.push(Check::pass("a"));
        assert!(r.passed());
        r.push(Check::fail("b", "witness"));
        assert!(!r.passed());
        assert_eq!(r.failures().count(), 1);
        let json = serde_json::to_string(&r).unwrap();
        assert!(json.contains("\"suite\":\"demo\""));
        // Passing checks without detail omit the field entirely.
        assert!(!json.contains("\"a\",\"passed\":true,\"detail\""));
    }
}
