use serde::{Deserialize, Serialize};

use super::point::Point2;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Verdict {
    Converged,
    Diverged,
    Inconclusive,
}

/// Step parameter of one trace entry: a scalar (offset, mesh size) or the
/// net point itself.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum StepParam {
    Scalar(f64),
    Point(Point2),
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TraceEntry {
    pub step: StepParam,
    pub estimate: f64,
}

/// Outcome of an iterative estimate: derivative, limit or integral.
///
/// When the verdict is `Converged`, `value` is present and the last trace
/// estimate lies within `residual` of it.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EstimateReport {
    pub value: Option<f64>,
    pub verdict: Verdict,
    pub trace: Vec<TraceEntry>,
    pub residual: f64,
    pub evaluations: usize,
}

impl EstimateReport {
    pub fn converged(&self) -> bool {
        self.verdict == Verdict::Converged
    }

    /// The converged value, if any.
    pub fn converged_value(&self) -> Option<f64> {
        if self.converged() {
            self.value
        } else {
            None
        }
    }

    pub fn last_estimate(&self) -> Option<f64> {
        self.trace.last().map(|t| t.estimate)
    }
}
