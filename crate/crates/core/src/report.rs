//! Pass/fail reports shared by the validators.

use serde::{Deserialize, Serialize};

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Failure {
    pub check: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub degree: Option<i32>,
    pub detail: String,
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct ValidationReport {
    pub failures: Vec<Failure>,
}

impl ValidationReport {
    pub fn is_valid(&self) -> bool {
        self.failures.is_empty()
    }

    pub fn push(&mut self, check: &str, degree: Option<i32>, detail: impl Into<String>) {
        self.failures.push(Failure { check: check.to_string(), degree, detail: detail.into() });
    }

    pub fn fail_at(&mut self, check: &str, degree: i32, detail: impl Into<String>) {
        self.push(check, Some(degree), detail);
    }

    pub fn extend(&mut self, other: ValidationReport) {
        self.failures.extend(other.failures);
    }

    pub fn to_text(&self) -> String {
        if self.is_valid() {
            return "valid\n".to_string();
        }
        let mut out = format!("invalid ({} failures)\n", self.failures.len());
        for f in &self.failures {
            match f.degree {
                Some(d) => out.push_str(&format!("  [{}] degree {}: {}\n", f.check, d, f.detail)),
                None => out.push_str(&format!("  [{}] {}\n", f.check, f.detail)),
            }
        }
        out
    }
}
