//! Three-family approach nets shared by limits, derivatives and improper
//! integrals.
//!
//! A double limit quantifies over every approach inside a (signed)
//! neighbourhood. Numerically we follow the diagonal `(s, s)` and the two
//! skewed paths `(s, 2s)` and `(2s, s)` with `s = t0 · 2^-k`, accelerate each
//! sequence, and compare the three limits.

use serde::{Deserialize, Serialize};

use crate::accel::{Acceleration, SequenceLimit};
use crate::domain::{EstimateReport, StepParam, TraceEntry, Verdict};
use crate::error::Result;

/// Path weights of the three families, diagonal first.
pub const FAMILIES: [(f64, f64); 3] = [(1.0, 1.0), (1.0, 2.0), (2.0, 1.0)];

pub fn family_label(w: (f64, f64)) -> &'static str {
    match (w.0 as u32, w.1 as u32) {
        (1, 1) => "(s,s)",
        (1, 2) => "(s,2s)",
        (2, 1) => "(2s,s)",
        _ => "(w1 s,w2 s)",
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct NetConfig {
    /// Maximum number of net steps per family.
    pub steps: usize,
    pub tol: f64,
    /// Initial step parameter `t0`.
    pub initial: f64,
    pub acceleration: Acceleration,
    /// Families separated by more than `divergence_factor · tol` witness
    /// divergence.
    pub divergence_factor: f64,
}

impl Default for NetConfig {
    fn default() -> Self {
        NetConfig {
            steps: 40,
            tol: 1e-6,
            initial: 0.125,
            acceleration: Acceleration::Epsilon,
            divergence_factor: 10.0,
        }
    }
}

/// One evaluated net point.
pub struct NetSample {
    pub value: f64,
    /// Absolute rounding noise of `value`.
    pub noise: f64,
    pub step: StepParam,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FamilyLimit {
    pub path: String,
    pub weights: (f64, f64),
    pub estimate: f64,
    pub error: f64,
    pub settled: bool,
    #[serde(skip)]
    pub trace: Vec<TraceEntry>,
    #[serde(skip)]
    pub last_step: Option<StepParam>,
    #[serde(skip)]
    pub last_raw: Option<f64>,
}

/// Two approach paths whose limits differ.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DivergenceWitness {
    pub first: FamilyLimit,
    pub second: FamilyLimit,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct NetOutcome {
    pub report: EstimateReport,
    pub families: Vec<FamilyLimit>,
    pub witness: Option<DivergenceWitness>,
}

/// Drive every family through the net. `sample(weights, t)` evaluates the
/// quantity at step parameter `t` along the path with the given weights.
pub fn run_families<F>(cfg: &NetConfig, mut sample: F) -> Result<Vec<FamilyLimit>>
where
    F: FnMut((f64, f64), f64) -> Result<NetSample>,
{
    let mut out = Vec::with_capacity(FAMILIES.len());
    for w in FAMILIES {
        let mut seq = SequenceLimit::new(cfg.acceleration);
        let mut trace = Vec::with_capacity(cfg.steps);
        let mut last_step = None;
        for k in 0..cfg.steps.max(1) {
            let t = cfg.initial * 0.5f64.powi(k as i32);
            let s = sample(w, t)?;
            let estimate = seq.push(s.value, s.noise);
            trace.push(TraceEntry {
                step: s.step,
                estimate,
            });
            last_step = Some(s.step);
            if seq.stalled() || settled_early(&seq, cfg.tol) {
                break;
            }
        }
        let (best, estimate, error) = seq.best().expect("at least one step");
        trace.truncate(best + 1);
        out.push(FamilyLimit {
            path: family_label(w).to_string(),
            weights: w,
            estimate,
            error,
            settled: error <= cfg.tol,
            trace,
            last_step,
            last_raw: seq.raw().get(best).copied(),
        });
    }
    Ok(out)
}

/// Enough steps taken and the error estimate is far below tolerance.
fn settled_early(seq: &SequenceLimit, tol: f64) -> bool {
    const MIN_STEPS: usize = 6;
    const MARGIN: f64 = 1e-3;
    seq.len() >= MIN_STEPS && seq.best().is_some_and(|(b, _, err)| b + 1 == seq.len() && err <= MARGIN * tol)
}

/// Combine family limits into a verdict.
pub fn summarize(cfg: &NetConfig, families: Vec<FamilyLimit>, evaluations: usize) -> NetOutcome {
    let diag = &families[0];
    let max_err = families.iter().map(|f| f.error).fold(0.0, f64::max);
    let spread = spread(&families);
    let all_settled = families.iter().all(|f| f.settled);

    let mut witness = None;
    'outer: for i in 0..families.len() {
        for j in i + 1..families.len() {
            let (a, b) = (&families[i], &families[j]);
            if a.settled && b.settled && (a.estimate - b.estimate).abs() > cfg.divergence_factor * cfg.tol {
                witness = Some(DivergenceWitness {
                    first: a.clone(),
                    second: b.clone(),
                });
                break 'outer;
            }
        }
    }

    let (verdict, value) = if all_settled && spread <= cfg.tol {
        (Verdict::Converged, Some(diag.estimate))
    } else if witness.is_some() {
        (Verdict::Diverged, None)
    } else {
        (Verdict::Inconclusive, None)
    };
    let report = EstimateReport {
        value,
        verdict,
        trace: diag.trace.clone(),
        residual: max_err.max(spread),
        evaluations,
    };
    NetOutcome {
        report,
        families,
        witness,
    }
}

fn spread(families: &[FamilyLimit]) -> f64 {
    let lo = families.iter().map(|f| f.estimate).fold(f64::INFINITY, f64::min);
    let hi = families.iter().map(|f| f.estimate).fold(f64::NEG_INFINITY, f64::max);
    hi - lo
}
