//! Machine-readable pass/fail reports for verification drivers and experiments.

use std::collections::BTreeMap;
use std::fmt;
use std::time::Duration;

use serde::{Deserialize, Serialize};
use serde_json::Value;

/// Detailed failure messages kept per report; the count is always exact.
const MAX_LISTED_FAILURES: usize = 20;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Assertion {
    pub description: String,
    pub expected: String,
    pub observed: String,
    pub pass: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ExperimentReport {
    pub lemma: String,
    pub parameters: BTreeMap<String, Value>,
    pub assertions: Vec<Assertion>,
    pub checked: usize,
    pub failure_count: usize,
    pub failures: Vec<String>,
    pub pass: bool,
    /// Wall-clock time; left out unless explicitly recorded so that reports
    /// stay byte-identical across runs.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub elapsed_ms: Option<u128>,
}

impl ExperimentReport {
    pub fn new(lemma: &str) -> Self {
        ExperimentReport {
            lemma: lemma.to_string(),
            parameters: BTreeMap::new(),
            assertions: Vec::new(),
            checked: 0,
            failure_count: 0,
            failures: Vec::new(),
            pass: true,
        elapsed_ms: None,
        }
    }

    pub fn param(mut self, key: &str, value: impl Into<Value>) -> Self {
        self.parameters.insert(key.to_string(), value.into());
        self
    }

    /// Records one assertion comparing an expected and an observed value.
    pub fn check(&mut self, description: &str, expected: impl fmt::Display, observed: impl fmt::Display) -> bool {
        let (expected, observed) = (expected.to_string(), observed.to_string());
        let pass = expected == observed;
        self.checked += 1;
        if !pass {
            self.note_failure(format!("{description}: expected {expected}, observed {observed}"));
        }
        self.assertions.push(Assertion { description: description.to_string(), expected, observed, pass });
        self.pass &= pass;
        pass
    }

    pub fn check_true(&mut self, description: &str, observed: bool) -> bool {
        self.check(description, true, observed)
    }

    /// Records an assertion over `checked` individual cases, `failures` of
    /// which went wrong.
    pub fn check_all(&mut self, description: &str, checked: usize, failures: Vec<String>) -> bool {
        let pass = failures.is_empty();
        self.checked += checked.saturating_sub(1);
        let observed = format!("{} of {checked} failing", failures.len());
        for f in failures {
            self.note_failure(format!("{description}: {f}"));
        }
        self.check(description, format!("0 of {checked} failing"), observed);
        pass
    }

    /// Folds a sub-report in as a single assertion.
    pub fn absorb(&mut self, description: &str, sub: &ExperimentReport) -> bool {
        let failures = sub.failures.clone();
        self.checked += sub.checked;
        for f in failures {
            self.note_failure(format!("{}: {f}", sub.lemma));
        }
        let pass = sub.pass;
        self.assertions.push(Assertion {
            description: description.to_string(),
            expected: "pass".into(),
            observed: if pass { "pass" } else { "fail" }.into(),
            pass,
        });
        self.pass &= pass;
        pass
    }

    fn note_failure(&mut self, msg: String) {
        self.failure_count += 1;
        if self.failures.len() < MAX_LISTED_FAILURES {
            self.failures.push(msg);
        }
    }

    pub fn with_elapsed(mut self, elapsed: Duration) -> Self {
        self.elapsed_ms = Some(elapsed.as_millis());
        self
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }
}

impl fmt::Display for ExperimentReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let params = self.parameters.iter().map(|(k, v)| format!("{k}={v}")).collect::<Vec<_>>().join(" ");
        writeln!(f, "{} [{}]: {}", self.lemma, params, if self.pass { "PASS" } else { "FAIL" })?;
        for a in &self.assertions {
            let mark = if a.pass { "ok  " } else { "FAIL" };
            writeln!(f, "  {mark} {} (expected {}, observed {})", a.description, a.expected, a.observed)?;
        }
        for msg in &self.failures {
            writeln!(f, "  - {msg}")?;
        }
        if self.failure_count > self.failures.len() {
            writeln!(f, "  ... {} more", self.failure_count - self.failures.len())?;
        }
        write!(f, "  {} checks", self.checked)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn pass_tracks_assertions() {
        let mut r = ExperimentReport::new("demo").param("k", 2);
        assert!(r.check("two", 2, 2));
        assert!(r.pass);
        assert!(!r.check_all("many", 10, vec!["x".into()]));
        assert!(!r.pass);
        assert_eq!(r.checked, 11);
        assert_eq!(r.failure_count, 2);
    }

    #[test]
    fn json_omits_elapsed_unless_set() {
        let r = ExperimentReport::new("demo");
        assert!(!r.to_json().contains("elapsed"));
        let r = r.with_elapsed(Duration::from_millis(5));
        let back: ExperimentReport = serde_json::from_str(&r.to_json()).unwrap();
        assert_eq!(back.elapsed_ms, Some(5));
    }
}
