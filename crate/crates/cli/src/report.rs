//! Verification reports: one record per check, written as JSON and CSV.

use std::fs::File;
use std::io::Write;
use std::path::Path;

use anyhow::Context;
use serde::Serialize;

use crate::config::{ScenarioConfig, SCHEMA_VERSION};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "UPPERCASE")]
pub enum Status {
    Pass,
    Fail,
    Skip,
}

/// How the actual value was obtained.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Provenance {
    Exact,
    ClosedForm,
    Quadrature,
    Extrapolated,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Check {
    pub id: String,
    /// Module invariant the check exercises, e.g. `fields.decomposition`.
    pub invariant: &'static str,
    pub inputs: String,
    pub expected: f64,
    pub actual: f64,
    /// The compared quantity is |actual − expected| unless stated in `note`.
    pub deviation: f64,
    pub tolerance: f64,
    pub status: Status,
    pub provenance: Provenance,
    pub note: String,
    /// Set when the library reported a non-convergence or internal error.
    #[serde(skip_serializing_if = "std::ops::Not::not")]
    pub numeric_failure: bool,
}

impl Check {
    /// PASS iff `deviation <= tolerance`.
    pub fn compare(invariant: &'static str, inputs: String, expected: f64, actual: f64, deviation: f64, tolerance: f64, provenance: Provenance) -> Self {
        let status = if deviation <= tolerance { Status::Pass } else { Status::Fail };
        Self {
            id: String::new(),
            invariant,
            inputs,
            expected,
            actual,
            deviation,
            tolerance,
            status,
            provenance,
            note: String::new(),
            numeric_failure: false,
        }
    }

    /// Absolute difference against a tolerance.
    pub fn close(invariant: &'static str, inputs: String, expected: f64, actual: f64, tolerance: f64, provenance: Provenance) -> Self {
        Self::compare(invariant, inputs, expected, actual, (actual - expected).abs(), tolerance, provenance)
    }

    /// A yes/no property, encoded as 1 (holds) against 1.
    pub fn holds(invariant: &'static str, inputs: String, ok: bool, provenance: Provenance) -> Self {
        let actual = if ok { 1.0 } else { 0.0 };
        Self::compare(invariant, inputs, 1.0, actual, 1.0 - actual, 0.0, provenance)
    }

    pub fn with_note(mut self, note: impl Into<String>) -> Self {
        self.note = note.into();
        self
    }

    pub fn skipped(invariant: &'static str, inputs: String, reason: impl Into<String>) -> Self {
        Self {
            id: String::new(),
            invariant,
            inputs,
            expected: f64::NAN,
            actual: f64::NAN,
            deviation: f64::NAN,
            tolerance: f64::NAN,
            status: Status::Skip,
            provenance: Provenance::Exact,
            note: reason.into(),
            numeric_failure: false,
        }
    }

    /// A family of checks that could not run because the library failed.
    pub fn failed(invariant: &'static str, err: &bnlab::Error) -> Self {
        Self {
            status: Status::Fail,
            note: err.to_string(),
            numeric_failure: true,
            ..Self::skipped(invariant, String::new(), "")
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Environment {
    pub bnlab_version: &'static str,
    pub target_os: &'static str,
    pub target_arch: &'static str,
}

impl Environment {
    pub fn current() -> Self {
        Self { bnlab_version: env!("CARGO_PKG_VERSION"), target_os: std::env::consts::OS, target_arch: std::env::consts::ARCH }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Summary {
    pub total: usize,
    pub passed: usize,
    pub failed: usize,
    pub skipped: usize,
    pub numeric_failures: usize,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Report {
    pub schema_version: u32,
    pub suite: String,
    pub status: Status,
    pub summary: Summary,
    pub environment: Environment,
    pub config: ScenarioConfig,
    pub tolerance_scale: f64,
    pub checks: Vec<Check>,
}

impl Report {
    /// Numbers the checks per invariant and derives the overall status,
    /// which is FAIL iff any check fails.
    pub fn new(suite: &str, config: ScenarioConfig, tolerance_scale: f64, mut checks: Vec<Check>) -> Self {
        let mut counts = std::collections::BTreeMap::<&str, usize>::new();
        for c in &mut checks {
            let n = counts.entry(c.invariant).or_default();
            c.id = format!("{}#{:03}", c.invariant, n);
            *n += 1;
        }
        let count = |s: Status| checks.iter().filter(|c| c.status == s).count();
        let summary = Summary {
            total: checks.len(),
            passed: count(Status::Pass),
            failed: count(Status::Fail),
            skipped: count(Status::Skip),
            numeric_failures: checks.iter().filter(|c| c.numeric_failure).count(),
        };
        let status = if summary.failed > 0 { Status::Fail } else { Status::Pass };
        Self {
            schema_version: SCHEMA_VERSION,
            suite: suite.into(),
            status,
            summary,
            environment: Environment::current(),
            config,
            tolerance_scale,
            checks,
        }
    }

    /// Writes `report.json` and `checks.csv` into `dir`.
    pub fn write(&self, dir: &Path) -> anyhow::Result<()> {
        std::fs::create_dir_all(dir).with_context(|| format!("cannot create {}", dir.display()))?;
        let mut json = serde_json::to_string_pretty(self)?;
        json.push('\n');
        File::create(dir.join("report.json"))?.write_all(json.as_bytes())?;
        let mut w = csv::Writer::from_path(dir.join("checks.csv"))?;
        w.write_record([
            "schema_version",
            "id",
            "invariant",
            "status",
            "provenance",
            "inputs",
            "expected",
            "actual",
            "deviation",
            "tolerance",
            "note",
        ])?;
        for c in &self.checks {
            w.write_record([
                SCHEMA_VERSION.to_string(),
                c.id.clone(),
                c.invariant.to_string(),
                format!("{:?}", c.status).to_uppercase(),
                serde_json::to_value(c.provenance)?.as_str().unwrap_or_default().to_string(),
                c.inputs.clone(),
                fmt(c.expected),
                fmt(c.actual),
                fmt(c.deviation),
                fmt(c.tolerance),
                c.note.clone(),
            ])?;
        }
        w.flush()?;
        Ok(())
    }
}

/// Shortest round-trip representation; empty for NaN.
pub fn fmt(v: f64) -> String {
    if v.is_nan() {
        String::new()
    } else {
        format!("{v:e}")
    }
}
