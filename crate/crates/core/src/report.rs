//! Structured results for verification suites and audits.  Reports are
//! plain data with a stable field order so that serialized output is byte
//! reproducible for a fixed seed.

use serde::Serialize;
use std::collections::BTreeMap;

/// Where a reference value comes from: quoted from the source material,
/// immediate from a definition, or derived through an independent
/// computation in test or audit code.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Provenance {
    Paper,
    Trivial,
    Derived,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum CheckStatus {
    Pass,
    Fail,
    /// Recorded for information only; never fails a run.
    Audit,
}

/// One named comparison or measurement.
#[derive(Clone, Debug, Serialize)]
pub struct CheckRow {
    pub name: String,
    pub input: String,
    pub expected: String,
    pub actual: String,
    pub residual: f64,
    pub tolerance: f64,
    pub provenance: Provenance,
    pub status: CheckStatus,
}

impl CheckRow {
    /// A pass/fail comparison: `status` is derived from
    /// `residual <= tolerance`.
    pub fn comparison(
        name: impl Into<String>,
        input: impl Into<String>,
        expected: f64,
        actual: f64,
        tolerance: f64,
        provenance: Provenance,
    ) -> Self {
        let residual = (expected - actual).abs();
        CheckRow {
            name: name.into(),
            input: input.into(),
            expected: format!("{}", expected),
            actual: format!("{}", actual),
            residual,
            tolerance,
            provenance,
            status: if residual.is_finite() && residual <= tolerance {
                CheckStatus::Pass
            } else {
                CheckStatus::Fail
            },
        }
    }

    /// A pass/fail row where the caller computed the residual itself (for
    /// relative or composite criteria).
    pub fn residual_check(
        name: impl Into<String>,
        input: impl Into<String>,
        expected: impl Into<String>,
        actual: impl Into<String>,
        residual: f64,
        tolerance: f64,
        provenance: Provenance,
    ) -> Self {
        CheckRow {
            name: name.into(),
            input: input.into(),
            expected: expected.into(),
            actual: actual.into(),
            residual,
            tolerance,
            provenance,
            status: if residual.is_finite() && residual <= tolerance {
                CheckStatus::Pass
            } else {
                CheckStatus::Fail
            },
        }
    }

    /// An informational measurement with no tolerance semantics.
    pub fn audit(
        name: impl Into<String>,
        input: impl Into<String>,
        actual: impl Into<String>,
        residual: f64,
        provenance: Provenance,
    ) -> Self {
        CheckRow {
            name: name.into(),
            input: input.into(),
            expected: String::new(),
            actual: actual.into(),
            residual,
            tolerance: f64::INFINITY,
            provenance,
            status: CheckStatus::Audit,
        }
    }
}

/// Wall clock timing, kept in its own optional field so that reproducibility
/// comparisons can strip it without touching anything else.
#[derive(Clone, Debug, Serialize)]
pub struct Timing {
    pub wall_ms: f64,
}

#[derive(Clone, Debug, Serialize)]
pub struct AuditReport {
    pub schema: u32,
    pub name: String,
    pub status: CheckStatus,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
    pub metadata: BTreeMap<String, String>,
    pub checks: Vec<CheckRow>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub timing: Option<Timing>,
}

impl AuditReport {
    pub fn new(name: impl Into<String>) -> Self {
        AuditReport {
            schema: 1,
            name: name.into(),
            status: CheckStatus::Pass,
            seed: None,
            metadata: BTreeMap::new(),
            checks: Vec::new(),
            timing: None,
        }
    }

    pub fn push(&mut self, row: CheckRow) {
        if row.status == CheckStatus::Fail {
            self.status = CheckStatus::Fail;
        }
        self.checks.push(row);
    }

    /// Mark the whole report as informational: rows keep their status but
    /// the report never counts as failed.
    pub fn into_audit_only(mut self) -> Self {
        self.status = CheckStatus::Audit;
        self
    }

    pub fn failed(&self) -> bool {
        self.status == CheckStatus::Fail
    }
}
