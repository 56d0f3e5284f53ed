//! Check reports: one record per verified identity instance.

use std::fmt;

use serde::{Deserialize, Serialize};

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CheckRecord {
    pub law: String,
    pub instance: String,
    pub pass: bool,
    /// Nonzero residual components, each a parseable expression. Present
    /// exactly when the check failed.
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub witness: Option<Vec<String>>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Report {
    pub subject: String,
    pub checks: Vec<CheckRecord>,
}

impl Report {
    pub fn new(subject: impl Into<String>) -> Self {
        Report {
            subject: subject.into(),
            checks: Vec::new(),
        }
    }

    pub fn pass(&mut self, law: &str, instance: impl Into<String>) {
        self.checks.push(CheckRecord {
            law: law.to_string(),
            instance: instance.into(),
            pass: true,
            witness: None,
        });
    }

    pub fn fail(&mut self, law: &str, instance: impl Into<String>, witness: Vec<String>) {
        self.checks.push(CheckRecord {
            law: law.to_string(),
            instance: instance.into(),
            pass: false,
            witness: Some(witness),
        });
    }

    /// Record `residual`: pass when `None`, fail with the given witness otherwise.
    pub fn record(&mut self, law: &str, instance: impl Into<String>, residual: Option<Vec<String>>) {
        match residual {
            None => self.pass(law, instance),
            Some(w) => self.fail(law, instance, w),
        }
    }

    pub fn push(&mut self, rec: CheckRecord) {
        self.checks.push(rec);
    }

    pub fn absorb(&mut self, other: Report) {
        self.checks.extend(other.checks);
    }

    pub fn overall(&self) -> bool {
        self.checks.iter().all(|c| c.pass)
    }

    pub fn failures(&self) -> impl Iterator<Item = &CheckRecord> {
        self.checks.iter().filter(|c| !c.pass)
    }

    pub fn first_failure(&self) -> Option<&CheckRecord> {
        self.failures().next()
    }

    pub fn to_json(&self) -> serde_json::Value {
        serde_json::json!({
            "subject": self.subject,
            "overall": if self.overall() { "pass" } else { "fail" },
            "checks": self.checks,
        })
    }

    /// Per-law pass counts followed by every failure with its witness.
    pub fn summary(&self) -> String {
        let mut laws: Vec<(&str, usize, usize)> = Vec::new();
        for c in &self.checks {
            match laws.iter_mut().find(|(l, _, _)| *l == c.law) {
                Some(entry) => {
                    entry.1 += 1;
                    entry.2 += usize::from(c.pass);
                }
                None => laws.push((&c.law, 1, usize::from(c.pass))),
            }
        }
        let mut out = format!(
            "{}: {}\n",
            self.subject,
            if self.overall() { "PASS" } else { "FAIL" }
        );
        for (law, total, ok) in laws {
            out.push_str(&format!("  {law}: {ok}/{total}\n"));
        }
        for c in self.failures() {
            out.push_str(&format!(
                "  FAIL {} at {}: residual [{}]\n",
                c.law,
                c.instance,
                c.witness.as_deref().unwrap_or_default().join(", ")
            ));
        }
        out
    }
}

impl fmt::Display for Report {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.summary())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn overall_is_conjunction() {
        let mut r = Report::new("x");
        assert!(r.overall());
        r.pass("a", "(E1)");
        assert!(r.overall());
        r.fail("a", "(E2)", vec!["u1".into()]);
        assert!(!r.overall());
        assert_eq!(r.to_json()["overall"], "fail");
        assert!(r.summary().contains("a: 1/2"));
    }
}
