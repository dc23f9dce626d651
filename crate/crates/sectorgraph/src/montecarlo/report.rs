//! Experiment report structures, serialized as versioned JSON.

use serde::{Deserialize, Serialize};

pub const SCHEMA_VERSION: u32 = 1;

/// A gating check: `pass` follows `kind`.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct CriterionRow {
    pub name: String,
    pub observed: f64,
    /// Reference value (`abs-diff`) or bound (`upper-bound`).
    pub target: f64,
    /// Allowed |observed - target| for `abs-diff`; unused for `upper-bound`.
    pub tolerance: f64,
    pub kind: String,
    pub pass: bool,
}

impl CriterionRow {
    pub fn abs_diff(name: impl Into<String>, observed: f64, target: f64, tolerance: f64) -> Self {
        let pass = (observed - target).abs() <= tolerance;
        Self {
            name: name.into(),
            observed,
            target,
            tolerance,
            kind: "abs-diff".into(),
            pass,
        }
    }

    pub fn upper_bound(name: impl Into<String>, observed: f64, bound: f64) -> Self {
        let pass = observed <= bound;
        Self {
            name: name.into(),
            observed,
            target: bound,
            tolerance: 0.0,
            kind: "upper-bound".into(),
            pass,
        }
    }
}

/// A reported (non-gating) numeric.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct MetricRow {
    pub name: String,
    pub value: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub std_error: Option<f64>,
}

impl MetricRow {
    pub fn new(name: impl Into<String>, value: f64) -> Self {
        Self {
            name: name.into(),
            value,
            std_error: None,
        }
    }

    pub fn with_se(name: impl Into<String>, value: f64, se: f64) -> Self {
        Self {
            name: name.into(),
            value,
            std_error: Some(se),
        }
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ExperimentReport {
    pub schema_version: u32,
    pub experiment: String,
    pub config: serde_json::Value,
    pub criteria: Vec<CriterionRow>,
    pub metrics: Vec<MetricRow>,
    pub warnings: Vec<String>,
    pub pass: bool,
}

impl ExperimentReport {
    pub fn new(experiment: &str, config: serde_json::Value) -> Self {
        Self {
            schema_version: SCHEMA_VERSION,
            experiment: experiment.to_string(),
            config,
            criteria: Vec::new(),
            metrics: Vec::new(),
            warnings: Vec::new(),
            pass: true,
        }
    }

    pub fn push_criterion(&mut self, row: CriterionRow) {
        self.pass &= row.pass;
        self.criteria.push(row);
    }

    pub fn to_json(&self) -> crate::Result<String> {
        Ok(serde_json::to_string_pretty(self)?)
    }
}
