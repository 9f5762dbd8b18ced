//! Improper double Newton integrals over open (possibly unbounded)
//! intervals.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::difference::delta2_noisy;
use crate::domain::{ExtendedPoint2, Interval2, Point2, ScalarField2, StepParam, TraceEntry, Verdict};
use crate::error::{Error, Result};
use crate::net::{run_families, summarize, DivergenceWitness, FamilyLimit, NetConfig, NetOutcome, NetSample};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ImproperConfig {
    pub steps: usize,
    pub tol: f64,
}

impl Default for ImproperConfig {
    fn default() -> Self {
        ImproperConfig { steps: 48, tol: 1e-6 }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "verdict", rename_all = "snake_case")]
pub enum ImproperVerdict {
    Convergent {
        value: f64,
        /// `[A, B, C, D]`: limits of `F` at the upper-right, lower-left,
        /// lower-right and upper-left corners; the value is `A + B − C − D`.
        #[serde(skip_serializing_if = "Option::is_none")]
        corner_limits: Option<[f64; 4]>,
    },
    Divergent {
        witnesses: Box<DivergenceWitness>,
    },
    Inconclusive {
        trace: Vec<TraceEntry>,
        #[serde(skip_serializing_if = "Option::is_none")]
        diagnostic: Option<String>,
    },
}

impl ImproperVerdict {
    pub fn value(&self) -> Option<f64> {
        match self {
            ImproperVerdict::Convergent { value, .. } => Some(*value),
            _ => None,
        }
    }

    pub fn label(&self) -> &'static str {
        match self {
            ImproperVerdict::Convergent { .. } => "convergent",
            ImproperVerdict::Divergent { .. } => "divergent",
            ImproperVerdict::Inconclusive { .. } => "inconclusive",
        }
    }

    /// The two witness limits of a divergent verdict.
    pub fn witness_limits(&self) -> Option<(f64, f64)> {
        match self {
            ImproperVerdict::Divergent { witnesses } => Some((witnesses.first.estimate, witnesses.second.estimate)),
            _ => None,
        }
    }

    pub(crate) fn inconclusive(diagnostic: impl Into<String>) -> Self {
        ImproperVerdict::Inconclusive {
            trace: Vec::new(),
            diagnostic: Some(diagnostic.into()),
        }
    }
}

/// One coordinate of an approach toward an interval end.
#[derive(Debug, Clone, Copy)]
struct End {
    /// Target value, possibly infinite.
    target: f64,
    /// The end belongs to the interval: the coordinate stays put.
    closed: bool,
    /// Direction into the interval: +1 from a lower end, −1 from an upper end.
    inward: f64,
    /// Scale of finite moves, and the anchor that tails at infinity start from.
    span: f64,
    other: f64,
}

impl End {
    fn at(&self, w: f64, t: f64) -> f64 {
        if self.closed {
            self.target
        } else if self.target.is_finite() {
            self.target + self.inward * w * t * self.span
        } else if self.other.is_finite() {
            self.other + self.target.signum() / (w * t)
        } else {
            self.target.signum() / (w * t)
        }
    }
}

fn ends(i: &Interval2) -> [[End; 2]; 2] {
    let axis = |lo: f64, hi: f64, lo_closed: bool, hi_closed: bool| {
        let span = if (hi - lo).is_finite() { hi - lo } else { 1.0 };
        [
            End {
                target: lo,
                closed: lo_closed,
                inward: 1.0,
                span,
                other: hi,
            },
            End {
                target: hi,
                closed: hi_closed,
                inward: -1.0,
                span,
                other: lo,
            },
        ]
    };
    [
        axis(i.lower.x1, i.upper.x1, i.closed.left, i.closed.right),
        axis(i.lower.x2, i.upper.x2, i.closed.bottom, i.closed.top),
    ]
}

fn net_config(cfg: &ImproperConfig) -> NetConfig {
    NetConfig {
        steps: cfg.steps,
        tol: cfg.tol,
        divergence_factor: 1.0,
        ..NetConfig::default()
    }
}

/// Limit of `F` toward the corner selected by `(e1, e2)`.
fn corner_limit(f: &ScalarField2, e1: End, e2: End, cfg: &ImproperConfig) -> Result<NetOutcome> {
    let net = net_config(cfg);
    let mut evaluations = 0usize;
    let families = run_families(&net, |w, t| {
        let x = Point2::new(e1.at(w.0, t), e2.at(w.1, t));
        let value = f.value(x)?;
        evaluations += 1;
        Ok(NetSample {
            value,
            noise: 4.0 * f64::EPSILON * value.abs(),
            step: StepParam::Point(x),
        })
    })?;
    Ok(summarize(&net, families, evaluations))
}

/// `Δ_x^y(F)` with `x` and `y` driven jointly toward the lower and upper
/// corners.
fn joint_limit(f: &ScalarField2, e: &[[End; 2]; 2], cfg: &ImproperConfig) -> Result<NetOutcome> {
    let net = net_config(cfg);
    let mut evaluations = 0usize;
    let families = run_families(&net, |w, t| {
        let x = Point2::new(e[0][0].at(w.0, t), e[1][0].at(w.1, t));
        let y = Point2::new(e[0][1].at(w.0, t), e[1][1].at(w.1, t));
        let (value, noise) = delta2_noisy(f, x, y)?;
        evaluations += 4;
        Ok(NetSample {
            value,
            noise,
            step: StepParam::Scalar(t),
        })
    })?;
    Ok(summarize(&net, families, evaluations))
}

/// Improper double Newton integral `lim Δ_x^y(F)` with `x → a⁺⁺` and
/// `y → b⁻⁻` over the open ends of `i`.
///
/// The four corner limits `A, B, C, D` of `F` are tried first; when all of
/// them exist the value is `A + B − C − D`. Otherwise `Δ_x^y(F)` is followed
/// along joint paths `(s,s)`, `(s,2s)` and `(2s,s)`. Two of them with
/// distinct limits witness divergence.
pub fn improper_newton_integral(f: &ScalarField2, i: &Interval2, cfg: &ImproperConfig) -> Result<ImproperVerdict> {
    let e = ends(i);
    // A = (b1, b2), B = (a1, a2), C = (b1, a2), D = (a1, b2).
    let corners = [(1usize, 1usize), (0, 0), (1, 0), (0, 1)];
    let attempt: Result<Vec<NetOutcome>> = corners
        .par_iter()
        .map(|&(k1, k2)| corner_limit(f, e[0][k1], e[1][k2], cfg))
        .collect();
    match attempt {
        Ok(limits) if limits.iter().all(|l| l.report.verdict == Verdict::Converged) => {
            let v: Vec<f64> = limits.iter().map(|l| l.report.value.expect("converged")).collect();
            return Ok(ImproperVerdict::Convergent {
                value: v[0] + v[1] - v[2] - v[3],
                corner_limits: Some([v[0], v[1], v[2], v[3]]),
            });
        }
        Ok(_) => {}
        Err(Error::Domain(d)) => return Ok(ImproperVerdict::inconclusive(format!("corner limit: {d}"))),
        Err(other) => return Err(other),
    }

    let joint = match joint_limit(f, &e, cfg) {
        Ok(j) => j,
        Err(Error::Domain(d)) => return Ok(ImproperVerdict::inconclusive(format!("joint net: {d}"))),
        Err(other) => return Err(other),
    };
    Ok(match (joint.report.verdict, joint.witness) {
        (Verdict::Converged, _) => ImproperVerdict::Convergent {
            value: joint.report.value.expect("converged"),
            corner_limits: None,
        },
        (_, Some(w)) => ImproperVerdict::Divergent { witnesses: Box::new(w) },
        _ => ImproperVerdict::Inconclusive {
            trace: joint.report.trace,
            diagnostic: Some(unsettled(&joint.families)),
        },
    })
}

fn unsettled(families: &[FamilyLimit]) -> String {
    let parts: Vec<String> = families
        .iter()
        .map(|f| format!("{} → {} (±{:.1e})", f.path, f.estimate, f.error))
        .collect();
    format!("joint net did not settle: {}", parts.join(", "))
}

/// Open interval from extended corners; convenience for callers.
pub fn open_interval(a: (f64, f64), b: (f64, f64)) -> Result<Interval2> {
    Interval2::open(ExtendedPoint2::new(a.0, a.1)?, ExtendedPoint2::new(b.0, b.1)?)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::domain::EdgeClosure;

    fn field(src: &str) -> ScalarField2 {
        ScalarField2::parse(src).unwrap()
    }

    #[test]
    fn log_primitive_converges_to_two_ln_two() {
        let i = open_interval((0.0, 0.0), (1.0, 1.0)).unwrap();
        let v = improper_newton_integral(&field("(x1+x2)*ln(x1+x2)"), &i, &ImproperConfig::default()).unwrap();
        assert!((v.value().unwrap() - 2.0 * 2f64.ln()).abs() < 1e-6, "{v:?}");
    }

    #[test]
    fn quotient_primitive_diverges() {
        let i = Interval2::new(
            ExtendedPoint2::new(0.0, 0.0).unwrap(),
            ExtendedPoint2::new(1.0, 1.0).unwrap(),
            EdgeClosure {
                left: false,
                right: true,
                bottom: false,
                top: true,
            },
        )
        .unwrap();
        let v = improper_newton_integral(&field("x1/(x1+x2)"), &i, &ImproperConfig::default()).unwrap();
        let (p, q) = v.witness_limits().unwrap();
        assert!(p.abs() < 1e-6 && (q + 1.0 / 6.0).abs() < 1e-6, "{v:?}");
    }

    #[test]
    fn ordinary_integral_in_disguise() {
        let i = open_interval((0.0, 0.0), (1.0, 1.0)).unwrap();
        let v = improper_newton_integral(&field("x1*x2"), &i, &ImproperConfig::default()).unwrap();
        assert!((v.value().unwrap() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn domain_error_is_inconclusive() {
        let i = open_interval((-1.0, 0.0), (1.0, 1.0)).unwrap();
        let v = improper_newton_integral(&field("ln(x1)*x2"), &i, &ImproperConfig::default()).unwrap();
        assert_eq!(v.label(), "inconclusive");
    }
}
