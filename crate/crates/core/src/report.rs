//! Machine-readable run reports.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

/// One measured quantity with its tolerance.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Check {
    pub name: String,
    pub residual: f64,
    pub tol: f64,
    pub pass: bool,
}

impl Check {
    /// Passes when `residual < tol`.
    pub fn below(name: impl Into<String>, residual: f64, tol: f64) -> Self {
        Check {
            name: name.into(),
            residual,
            tol,
            pass: residual < tol,
        }
    }

    /// Passes only when `residual == 0`.
    pub fn exact(name: impl Into<String>, residual: f64) -> Self {
        Check {
            name: name.into(),
            residual,
            tol: 0.0,
            pass: residual == 0.0,
        }
    }
}

/// Result of one command. Contains no timing, so equal inputs give equal
/// bytes.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RunReport {
    pub command: String,
    /// SHA-256 of the canonical description of the inputs.
    pub inputs: String,
    pub checks: Vec<Check>,
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    pub info: BTreeMap<String, String>,
    pub pass: bool,
}

impl RunReport {
    pub fn new(command: impl Into<String>, inputs: &str) -> Self {
        RunReport {
            command: command.into(),
            inputs: digest(inputs),
            checks: Vec::new(),
            info: BTreeMap::new(),
            pass: true,
        }
    }

    pub fn push(&mut self, check: Check) {
        self.pass &= check.pass;
        self.checks.push(check);
    }

    pub fn extend(&mut self, checks: impl IntoIterator<Item = Check>) {
        for check in checks {
            self.push(check);
        }
    }

    pub fn note(&mut self, key: impl Into<String>, value: impl Into<String>) {
        self.info.insert(key.into(), value.into());
    }

    pub fn check(&self, name: &str) -> Option<&Check> {
        self.checks.iter().find(|c| c.name == name)
    }

    pub fn failures(&self) -> impl Iterator<Item = &Check> {
        self.checks.iter().filter(|c| !c.pass)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("reports always serialize")
    }

    /// One line per check.
    pub fn to_text(&self) -> String {
        let mut out = format!(
            "{} ({})\n",
            self.command,
            if self.pass { "pass" } else { "FAIL" }
        );
        for (k, v) in &self.info {
            out.push_str(&format!("  {k}: {v}\n"));
        }
        for c in &self.checks {
            out.push_str(&format!(
                "  [{}] {:<40} {:>12.3e}  tol {:.1e}\n",
                if c.pass { "ok" } else { "FAIL" },
                c.name,
                c.residual,
                c.tol
            ));
        }
        out
    }
}

/// Lowercase hex SHA-256.
pub fn digest(text: &str) -> String {
    Sha256::digest(text.as_bytes())
        .iter()
        .map(|b| format!("{b:02x}"))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn pass_is_the_conjunction() {
        let mut r = RunReport::new("demo", "x");
        assert!(r.pass);
        r.push(Check::below("a", 1e-10, 1e-9));
        r.push(Check::exact("b", 0.0));
        assert!(r.pass);
        r.push(Check::below("c", 1e-9, 1e-9));
        assert!(!r.pass);
        assert_eq!(r.failures().count(), 1);
        assert_eq!(r.check("b").unwrap().tol, 0.0);
    }

    #[test]
    fn json_round_trip() {
        let mut r = RunReport::new("demo", "x");
        r.push(Check::below("a", 0.25, 1.0));
        r.note("support", "(0.1, 0.2)");
        let back: RunReport = serde_json::from_str(&r.to_json()).unwrap();
        assert_eq!(back, r);
        let value: serde_json::Value = serde_json::from_str(&r.to_json()).unwrap();
        for key in ["command", "checks", "pass"] {
            assert!(value.get(key).is_some());
        }
    }

    #[test]
    fn digest_of_empty_input() {
        assert_eq!(
            digest(""),
            "e3b0c44298fc1c149afbf4c8996fb92427ae41e4649b934ca495991b7852b855"
        );
    }
}
