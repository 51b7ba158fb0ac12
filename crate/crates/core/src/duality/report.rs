use serde::Serialize;

use crate::algebra::{IdentityOutcome, Witness};
use crate::localization::{BetaClass, ModelShape};

pub const SCHEMA_VERSION: u32 = 1;

/// One checked identity instance.
#[derive(Clone, Debug, Serialize)]
pub struct CheckRecord {
    pub identity: String,
    /// Plain-language statement of what was checked.
    pub statement: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub shape: Option<ModelShape>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub beta: Option<BetaClass>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub fixed_point: Option<String>,
    /// `a` for propositions and lemma forms, the truncation order for theorems.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub degree: Option<i64>,
    pub points: usize,
    pub pass: bool,
    pub pole_retries: u64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub digest: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub detail: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub witness: Option<Witness>,
    pub elapsed_ms: u64,
}

impl CheckRecord {
    pub fn new(identity: impl Into<String>, statement: impl Into<String>) -> Self {
        CheckRecord {
            identity: identity.into(),
            statement: statement.into(),
            shape: None,
            beta: None,
            fixed_point: None,
            degree: None,
            points: 0,
            pass: false,
            pole_retries: 0,
            digest: None,
            detail: None,
            witness: None,
            elapsed_ms: 0,
        }
    }

    pub fn with_shape(mut self, shape: ModelShape) -> Self {
        self.shape = Some(shape);
        self
    }

    pub fn with_beta(mut self, beta: BetaClass) -> Self {
        self.beta = Some(beta);
        self
    }

    pub fn with_fixed_point(mut self, fp: impl Into<String>) -> Self {
        self.fixed_point = Some(fp.into());
        self
    }

    pub fn with_degree(mut self, d: i64) -> Self {
        self.degree = Some(d);
        self
    }

    pub fn with_detail(mut self, detail: impl Into<String>) -> Self {
        self.detail = Some(detail.into());
        self
    }

    /// Fill pass/fail, digest and the first witness from a sampling outcome.
    pub fn with_outcome(mut self, outcome: &IdentityOutcome) -> Self {
        self.points = outcome.points;
        self.pass = outcome.passed();
        self.pole_retries = outcome.pole_retries;
        self.digest = Some(outcome.digest.clone());
        self.witness = outcome.failures.first().cloned();
        self
    }

    /// A record for a purely discrete check.
    pub fn exact(mut self, pass: bool) -> Self {
        self.pass = pass;
        self
    }

    pub fn elapsed(mut self, ms: u64) -> Self {
        self.elapsed_ms = ms;
        self
    }

    fn sort_key(&self) -> (String, Option<ModelShape>, Option<BetaClass>, Option<String>, Option<i64>) {
        (self.identity.clone(), self.shape, self.beta.clone(), self.fixed_point.clone(), self.degree)
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct Report {
    pub schema: u32,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub config: Option<serde_json::Value>,
    pub passed: bool,
    pub checks: usize,
    pub failures: usize,
    pub records: Vec<CheckRecord>,
}

impl Default for Report {
    fn default() -> Self {
        Report { schema: SCHEMA_VERSION, config: None, passed: true, checks: 0, failures: 0, records: Vec::new() }
    }
}

impl Report {
    pub fn new() -> Self {
        Report::default()
    }

    pub fn push(&mut self, record: CheckRecord) {
        self.records.push(record);
        self.refresh();
    }

    pub fn extend(&mut self, other: Report) {
        self.records.extend(other.records);
        self.refresh();
    }

    fn refresh(&mut self) {
        self.checks = self.records.len();
        self.failures = self.records.iter().filter(|r| !r.pass).count();
        self.passed = self.failures == 0;
    }

    /// Sort records by identity, shape, β, fixed point and degree.
    pub fn canonicalize(&mut self) {
        self.records.sort_by_key(|r| r.sort_key());
    }

    /// Canonical pretty JSON; `with_timing = false` zeroes every
    /// `elapsed_ms` so that equal runs give equal bytes.
    pub fn to_json(&self, with_timing: bool) -> String {
        let mut copy = self.clone();
        copy.canonicalize();
        if !with_timing {
            for r in &mut copy.records {
                r.elapsed_ms = 0;
            }
        }
        serde_json::to_string_pretty(&copy).expect("report serializes")
    }

    pub fn to_text(&self) -> String {
        let mut copy = self.clone();
        copy.canonicalize();
        let mut out = String::new();
        for r in &copy.records {
            let mut line = format!("{} {}", if r.pass { "PASS" } else { "FAIL" }, r.identity);
            if let Some(s) = &r.shape {
                line.push_str(&format!(" {s}"));
            }
            if let Some(b) = &r.beta {
                line.push_str(&format!(" {b}"));
            }
            if let Some(fp) = &r.fixed_point {
                line.push_str(&format!(" fp={fp}"));
            }
            if let Some(d) = r.degree {
                line.push_str(&format!(" deg={d}"));
            }
            if let Some(detail) = &r.detail {
                line.push_str(&format!(" ({detail})"));
            }
            out.push_str(&line);
            out.push('\n');
        }
        out.push_str(&format!("{} checks, {} failed\n", copy.checks, copy.failures));
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn canonical_order_and_timing() {
        let mut a = Report::new();
        a.push(CheckRecord::new("b", "second").exact(true).elapsed(5));
        a.push(CheckRecord::new("a", "first").exact(false).elapsed(7));
        let mut b = Report::new();
        b.push(CheckRecord::new("a", "first").exact(false).elapsed(1));
        b.push(CheckRecord::new("b", "second").exact(true).elapsed(2));
        assert_eq!(a.to_json(false), b.to_json(false));
        assert_ne!(a.to_json(true), b.to_json(true));
        assert!(!a.passed);
        assert_eq!(a.failures, 1);
        assert!(a.to_json(false).contains("\"schema\": 1"));
    }
}
