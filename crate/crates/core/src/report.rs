//! Suite-level verification reports shared by the command line and the
//! acceptance tests.

use std::fmt;
use std::time::Duration;

use serde::Serialize;
use serde_json::Value;

#[derive(Clone, Copy, Debug, Serialize, PartialEq, Eq)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum Verdict {
    Pass,
    Fail,
    Skipped,
}

impl Verdict {
    pub fn of(ok: bool) -> Self {
        if ok {
            Verdict::Pass
        } else {
            Verdict::Fail
        }
    }
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Verdict::Pass => "PASS",
            Verdict::Fail => "FAIL",
            Verdict::Skipped => "SKIPPED",
        })
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct Check {
    pub name: String,
    pub status: Verdict,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub detail: Option<String>,
    /// Present on every failure.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub witness: Option<Value>,
}

impl Check {
    pub fn pass(name: impl Into<String>, detail: impl Into<String>) -> Self {
        Check { name: name.into(), status: Verdict::Pass, detail: Some(detail.into()), witness: None }
    }

    pub fn fail(name: impl Into<String>, detail: impl Into<String>, witness: Value) -> Self {
        Check { name: name.into(), status: Verdict::Fail, detail: Some(detail.into()), witness: Some(witness) }
    }

    pub fn skipped(name: impl Into<String>, reason: impl Into<String>) -> Self {
        Check { name: name.into(), status: Verdict::Skipped, detail: Some(reason.into()), witness: None }
    }

    /// Pass or fail on `ok`; the witness is only built on failure.
    pub fn from_bool(
        name: impl Into<String>,
        ok: bool,
        detail: impl Into<String>,
        witness: impl FnOnce() -> Value,
    ) -> Self {
        if ok {
            Self::pass(name, detail)
        } else {
            Self::fail(name, detail, witness())
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct VerificationReport {
    pub suite: String,
    pub checks: Vec<Check>,
    /// Only timing differs between identical runs.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub wall_time_ms: Option<u64>,
}

impl VerificationReport {
    pub fn new(suite: impl Into<String>) -> Self {
        VerificationReport { suite: suite.into(), checks: Vec::new(), wall_time_ms: None }
    }

    pub fn push(&mut self, check: Check) {
        self.checks.push(check);
    }

    pub fn extend(&mut self, other: VerificationReport) {
        let prefix = other.suite;
        self.checks.extend(other.checks.into_iter().map(|mut c| {
            c.name = format!("{prefix}/{}", c.name);
            c
        }));
    }

    pub fn timed(mut self, elapsed: Duration) -> Self {
        self.wall_time_ms = Some(elapsed.as_millis() as u64);
        self
    }

    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.status != Verdict::Fail)
    }

    pub fn count(&self, status: Verdict) -> usize {
        self.checks.iter().filter(|c| c.status == status).count()
    }

    /// 0 iff nothing failed.
    pub fn exit_code(&self) -> i32 {
        if self.passed() {
            0
        } else {
            1
        }
    }
}

impl fmt::Display for VerificationReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "suite: {}", self.suite)?;
        let width = self.checks.iter().map(|c| c.name.len()).max().unwrap_or(0);
        for c in &self.checks {
            write!(f, "{:<7}  {:<width$}", c.status.to_string(), c.name)?;
            if let Some(d) = &c.detail {
                write!(f, "  {d}")?;
            }
            writeln!(f)?;
            if let Some(w) = &c.witness {
                writeln!(f, "         witness: {w}")?;
            }
        }
        write!(
            f,
            "{} passed, {} failed, {} skipped",
            self.count(Verdict::Pass),
            self.count(Verdict::Fail),
            self.count(Verdict::Skipped)
        )
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use serde_json::json;

    #[test]
    fn exit_code_contract() {
        let mut r = VerificationReport::new("demo");
        r.push(Check::pass("a", "fine"));
        r.push(Check::skipped("b", "hypotheses fail"));
        assert_eq!(r.exit_code(), 0);
        r.push(Check::from_bool("c", false, "broken", || json!({"x": 1})));
        assert_eq!(r.exit_code(), 1);
        assert!(r.checks.iter().filter(|c| c.status == Verdict::Fail).all(|c| c.witness.is_some()));
        let text = r.to_string();
        assert!(text.contains("1 passed, 1 failed, 1 skipped"));
        let v = serde_json::to_value(&r).unwrap();
        assert_eq!(v["checks"][2]["status"], "FAIL");
        assert!(v.get("wall_time_ms").is_none());
    }
}
