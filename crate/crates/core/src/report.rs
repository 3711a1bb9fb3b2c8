use std::collections::BTreeMap;
use std::fmt;
use std::time::{Duration, Instant};

use serde::{Deserialize, Serialize};

const NONE: &str = "no counterexamples";

/// One named comparison of an expected value with an observed one.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Check {
    pub name: String,
    pub expected: String,
    pub actual: String,
    pub pass: bool,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub note: Option<String>,
}

/// Named checks collected by one command run.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct VerificationReport {
    pub schema: u32,
    pub command: String,
    pub parameters: BTreeMap<String, String>,
    pub checks: Vec<Check>,
    pub elapsed_ms: u64,
    pub pass: bool,
    #[serde(skip)]
    started: Option<Instant>,
}

impl VerificationReport {
    pub fn new(command: impl Into<String>) -> Self {
        VerificationReport {
            schema: 1,
            command: command.into(),
            parameters: BTreeMap::new(),
            checks: Vec::new(),
            elapsed_ms: 0,
            pass: true,
            started: Some(Instant::now()),
        }
    }

    pub fn param(mut self, key: &str, value: impl ToString) -> Self {
        self.parameters.insert(key.to_string(), value.to_string());
        self
    }

    pub fn set_param(&mut self, key: &str, value: impl ToString) {
        self.parameters.insert(key.to_string(), value.to_string());
    }

    /// Records `expected == actual` under `name`.
    pub fn check_eq<E: PartialEq + fmt::Display>(
        &mut self,
        name: impl Into<String>,
        expected: E,
        actual: E,
    ) -> bool {
        let pass = expected == actual;
        self.push(Check {
            name: name.into(),
            expected: expected.to_string(),
            actual: actual.to_string(),
            pass,
            note: None,
        });
        pass
    }

    /// Records a boolean property (expected `true`).
    pub fn check(&mut self, name: impl Into<String>, holds: bool) -> bool {
        self.check_eq(name, true, holds)
    }

    /// Records that a search found no counterexamples; lists them otherwise.
    pub fn check_clean(&mut self, name: impl Into<String>, offenders: Vec<String>) -> bool {
        let actual = if offenders.is_empty() {
            NONE.to_string()
        } else {
            offenders.join(" ")
        };
        self.check_eq(name.into(), NONE.to_string(), actual)
    }

    /// Records a check that never affects the overall verdict.
    pub fn note(
        &mut self,
        name: impl Into<String>,
        expected: impl ToString,
        actual: impl ToString,
        note: impl Into<String>,
    ) {
        self.checks.push(Check {
            name: name.into(),
            expected: expected.to_string(),
            actual: actual.to_string(),
            pass: true,
            note: Some(note.into()),
        });
    }

    pub fn push(&mut self, check: Check) {
        self.pass &= check.pass;
        self.checks.push(check);
    }

    pub fn extend(&mut self, other: VerificationReport) {
        for c in other.checks {
            self.push(c);
        }
    }

    pub fn failures(&self) -> impl Iterator<Item = &Check> {
        self.checks.iter().filter(|c| !c.pass)
    }

    /// Stops the clock.
    pub fn finish(mut self) -> Self {
        if let Some(t) = self.started.take() {
            self.elapsed_ms = t.elapsed().as_millis() as u64;
        }
        self
    }

    pub fn elapsed(&self) -> Duration {
        Duration::from_millis(self.elapsed_ms)
    }

    /// JSON with object keys in sorted order.
    pub fn to_json(&self) -> String {
        let value = serde_json::to_value(self).expect("report serializes");
        serde_json::to_string_pretty(&value).expect("value serializes")
    }
}

impl fmt::Display for VerificationReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for c in &self.checks {
            let tag = if c.pass { "PASS" } else { "FAIL" };
            write!(
                f,
                "[{tag}] {}: expected {}, got {}",
                c.name, c.expected, c.actual
            )?;
            if let Some(n) = &c.note {
                write!(f, " ({n})")?;
            }
            writeln!(f)?;
        }
        write!(
            f,
            "{}: {} ({} checks, {} ms)",
            self.command,
            if self.pass { "PASS" } else { "FAIL" },
            self.checks.len(),
            self.elapsed_ms
        )
    }
}
