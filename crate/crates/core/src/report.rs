use serde::{Deserialize, Serialize};

/// Outcome of a single named check inside a [`ValidationReport`].
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CheckResult {
    pub name: String,
    pub passed: bool,
    /// Witness on failure, or a note for checks that are recorded but not decided.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub detail: Option<String>,
}

/// A list of checks run against one object. Failures are entries, not errors.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct ValidationReport {
    pub subject: String,
    pub checks: Vec<CheckResult>,
}

impl ValidationReport {
    pub fn new(subject: impl Into<String>) -> Self {
        Self {
            subject: subject.into(),
            checks: Vec::new(),
        }
    }

    pub fn pass(&mut self, name: &str) {
        self.checks.push(CheckResult {
            name: name.to_string(),
            passed: true,
            detail: None,
        });
    }

    pub fn note(&mut self, name: &str, note: impl Into<String>) {
        self.checks.push(CheckResult {
            name: name.to_string(),
            passed: true,
            detail: Some(note.into()),
        });
    }

    pub fn fail(&mut self, name: &str, witness: impl Into<String>) {
        self.checks.push(CheckResult {
            name: name.to_string(),
            passed: false,
            detail: Some(witness.into()),
        });
    }

    /// Records `name` as passed unless `witnesses` is non-empty.
    pub fn record(&mut self, name: &str, witnesses: Vec<String>) {
        if witnesses.is_empty() {
            self.pass(name);
        } else {
            self.fail(name, witnesses.join("; "));
        }
    }

    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }

    pub fn check(&self, name: &str) -> Option<&CheckResult> {
        self.checks.iter().find(|c| c.name == name)
    }

    pub fn failures(&self) -> impl Iterator<Item = &CheckResult> {
        self.checks.iter().filter(|c| !c.passed)
    }

    /// Merges a nested report, prefixing its check names.
    pub fn absorb(&mut self, prefix: &str, other: &ValidationReport) {
        for c in &other.checks {
            self.checks.push(CheckResult {
                name: format!("{prefix}/{}", c.name),
                passed: c.passed,
                detail: c.detail.clone(),
            });
        }
    }

    pub fn failure_summary(&self) -> String {
        let parts: Vec<String> = self
            .failures()
            .map(|c| match &c.detail {
                Some(d) => format!("{} ({d})", c.name),
                None => c.name.clone(),
            })
            .collect();
        if parts.is_empty() {
            "no failures".to_string()
        } else {
            parts.join(", ")
        }
    }
}
