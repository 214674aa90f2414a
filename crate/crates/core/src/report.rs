use std::fmt;

use serde::{Deserialize, Serialize};

/// Outcome of an exhaustive or sampled property check.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct CheckReport {
    pub name: String,
    pub universe: String,
    pub cases_checked: u64,
    pub violations: Vec<String>,
}

impl CheckReport {
    pub fn new(name: impl Into<String>, universe: impl Into<String>) -> Self {
        CheckReport {
            name: name.into(),
            universe: universe.into(),
            cases_checked: 0,
            violations: Vec::new(),
        }
    }

    pub fn passed(&self) -> bool {
        self.violations.is_empty()
    }

    pub fn case(&mut self) {
        self.cases_checked += 1;
    }

    pub fn violation(&mut self, what: impl Into<String>) {
        self.violations.push(what.into());
    }

    /// Records one case and a violation when `ok` is false.
    pub fn expect(&mut self, ok: bool, what: impl FnOnce() -> String) {
        self.cases_checked += 1;
        if !ok {
            self.violations.push(what());
        }
    }

    /// Folds partial reports (e.g. one per parallel task) into this one, in order.
    pub fn absorb(&mut self, parts: impl IntoIterator<Item = (u64, Vec<String>)>) {
        for (cases, violations) in parts {
            self.cases_checked += cases;
            self.violations.extend(violations);
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("report serializes")
    }
}

impl fmt::Display for CheckReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let status = if self.passed() { "PASS" } else { "FAIL" };
        write!(
            f,
            "{status} {} [{}] cases={}",
            self.name, self.universe, self.cases_checked
        )?;
        if let Some(first) = self.violations.first() {
            write!(f, " violations={} first: {first}", self.violations.len())?;
        }
        Ok(())
    }
}
