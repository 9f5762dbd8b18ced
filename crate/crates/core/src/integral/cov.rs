//! Change of variables `∬_D f = ∫_a^b (f∘h)·|J|`.

use serde::Serialize;

use super::improper::{improper_newton_integral, ImproperConfig, ImproperVerdict};
use super::riemann::{riemann_sum, SampleRule};
use crate::accel::{Acceleration, SequenceLimit};
use crate::derivative::{double_derivative, DerivConfig};
use crate::domain::{Interval2, Point2, ScalarField2, StepParam, TraceEntry};
use crate::error::{DomainError, Error, Result};

#[derive(Debug, Clone)]
pub enum Jacobian {
    /// `J(u, v)`; its absolute value is used.
    Analytic(ScalarField2),
    /// Central differences of the map with step `step · max(1, |u_i|)`.
    FiniteDifference { step: f64 },
}

impl Default for Jacobian {
    fn default() -> Self {
        Jacobian::FiniteDifference { step: 1e-5 }
    }
}

/// A parametrisation `h : (a, b) → D` of the integration domain. Bijectivity
/// and regularity of `h` are the caller's assertion.
#[derive(Debug, Clone)]
pub struct CovSpec {
    pub map: (ScalarField2, ScalarField2),
    pub jacobian: Jacobian,
    pub param_interval: Interval2,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CovResult {
    pub verdict: ImproperVerdict,
    /// Largest `|G′ − g|` over a few interior parameter points, when a
    /// primitive was supplied.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub primitive_residual: Option<f64>,
}

fn jacobian_at(spec: &CovSpec, p: Point2) -> Result<f64, DomainError> {
    match &spec.jacobian {
        Jacobian::Analytic(j) => Ok(j.eval(p)?.abs()),
        Jacobian::FiniteDifference { step } => {
            let (h1, h2) = (&spec.map.0, &spec.map.1);
            let du = step * p.x1.abs().max(1.0);
            let dv = step * p.x2.abs().max(1.0);
            let d = |h: &ScalarField2, e: Point2, s: f64| -> Result<f64, DomainError> {
                Ok((h.eval(p + e * s)? - h.eval(p - e * s)?) / (2.0 * s))
            };
            let (eu, ev) = (Point2::new(1.0, 0.0), Point2::new(0.0, 1.0));
            let det = d(h1, eu, du)? * d(h2, ev, dv)? - d(h1, ev, dv)? * d(h2, eu, du)?;
            Ok(det.abs())
        }
    }
}

/// The pulled-back integrand `g = (f∘h)·|J|` on the parameter interval.
pub fn pullback(f: &ScalarField2, spec: &CovSpec) -> ScalarField2 {
    let f = f.clone();
    let spec = spec.clone();
    let hint = spec.param_interval;
    ScalarField2::from_outcome_fn(move |p| {
        let x = Point2::try_new(spec.map.0.eval(p)?, spec.map.1.eval(p)?)
            .map_err(|e| DomainError::new(e.to_string()))?;
        Ok(f.eval(x)? * jacobian_at(&spec, p)?)
    })
    .with_domain_hint(hint)
}

/// Probe points strictly inside a possibly unbounded interval.
fn interior_probes(i: &Interval2, n: usize) -> Vec<Point2> {
    let axis = |lo: f64, hi: f64, s: f64| match (lo.is_finite(), hi.is_finite()) {
        (true, true) => lo + s * (hi - lo),
        (true, false) => lo + s / (1.0 - s),
        (false, true) => hi - (1.0 - s) / s,
        (false, false) => (s - 0.5) / (s * (1.0 - s)),
    };
    let mut out = Vec::with_capacity(n * n);
    for j in 0..n {
        for k in 0..n {
            let s = (j as f64 + 0.5) / n as f64;
            let t = (k as f64 + 0.5) / n as f64;
            out.push(Point2::new(
                axis(i.lower.x1, i.upper.x1, s),
                axis(i.lower.x2, i.upper.x2, t),
            ));
        }
    }
    out
}

/// Substitution for one parameter axis. Infinite ends are mapped to the
/// unit interval, so exhausting compacts of the image span `~2^k` while the
/// partition stays uniform.
#[derive(Debug, Clone, Copy)]
enum AxisMap {
    Identity(f64, f64),
    /// `u = lo + s/(1−s)`.
    Upper(f64),
    /// `u = hi − (1−s)/s`.
    Lower(f64),
    /// `u = (s − 1/2)/(s(1−s))`.
    Both,
}

impl AxisMap {
    fn new(lo: f64, hi: f64) -> Self {
        match (lo.is_finite(), hi.is_finite()) {
            (true, true) => AxisMap::Identity(lo, hi),
            (true, false) => AxisMap::Upper(lo),
            (false, true) => AxisMap::Lower(hi),
            (false, false) => AxisMap::Both,
        }
    }

    /// Bounds of the substituted coordinate.
    fn range(self) -> (f64, f64) {
        match self {
            AxisMap::Identity(lo, hi) => (lo, hi),
            _ => (0.0, 1.0),
        }
    }

    /// `(u(s), u′(s))`.
    fn apply(self, s: f64) -> (f64, f64) {
        match self {
            AxisMap::Identity(..) => (s, 1.0),
            AxisMap::Upper(lo) => (lo + s / (1.0 - s), 1.0 / ((1.0 - s) * (1.0 - s))),
            AxisMap::Lower(hi) => (hi - (1.0 - s) / s, 1.0 / (s * s)),
            AxisMap::Both => {
                let q = s * (1.0 - s);
                ((s - 0.5) / q, (s * s - s + 0.5) / (q * q))
            }
        }
    }
}

/// Compact sub-interval `k` of an exhausting sequence in substituted
/// coordinates: margin `span·2^-(k+1)` at each end.
fn exhausting_compact(maps: (AxisMap, AxisMap), k: usize) -> Result<Interval2> {
    let r = 0.5f64.powi(k as i32 + 1);
    let shrink = |(lo, hi): (f64, f64)| (lo + r * (hi - lo), hi - r * (hi - lo));
    let (a1, b1) = shrink(maps.0.range());
    let (a2, b2) = shrink(maps.1.range());
    Interval2::closed(Point2::new(a1, a2), Point2::new(b1, b2))
}

/// Integrate `f` over `h((a, b))` through the parameter interval.
///
/// With a primitive `G` of the pulled-back integrand the result is the
/// improper Newton integral of `G`, and `G′ = g` is spot-checked at interior
/// points. Without one, Riemann integrals over an exhausting sequence of
/// compact sub-intervals are extrapolated.
pub fn change_of_variables_integral(
    f: &ScalarField2,
    spec: &CovSpec,
    primitive: Option<&ScalarField2>,
    cfg: &ImproperConfig,
) -> Result<CovResult> {
    let g = pullback(f, spec);
    let probes = interior_probes(&spec.param_interval, 4);
    let mut jac = Vec::with_capacity(probes.len());
    for p in &probes {
        match jacobian_at(spec, *p) {
            Ok(j) => jac.push(j),
            Err(e) => {
                return Ok(CovResult {
                    verdict: ImproperVerdict::inconclusive(format!("Jacobian at {p}: {e}")),
                    primitive_residual: None,
                })
            }
        }
    }
    if jac.iter().all(|j| *j == 0.0) {
        return Ok(CovResult {
            verdict: ImproperVerdict::inconclusive("Jacobian vanishes at every probe point"),
            primitive_residual: None,
        });
    }

    match primitive {
        Some(big_g) => {
            let dcfg = DerivConfig::with_tol(cfg.tol);
            // Keep the derivative nets inside the parameter interval.
            let hinted = match big_g.domain_hint() {
                Some(_) => big_g.clone(),
                None => big_g.clone().with_domain_hint(spec.param_interval),
            };
            let mut worst: f64 = 0.0;
            for p in probes.iter().step_by(3) {
                let d = double_derivative(&hinted, *p, None, &dcfg)?;
                let expected = g.value(*p)?;
                worst = worst.max((d.best_estimate() - expected).abs());
            }
            Ok(CovResult {
                verdict: improper_newton_integral(big_g, &spec.param_interval, cfg)?,
                primitive_residual: Some(worst),
            })
        }
        None => Ok(CovResult {
            verdict: exhaust(&g, &spec.param_interval, cfg)?,
            primitive_residual: None,
        }),
    }
}

/// Riemann integral on a compact box: midpoint sums on `8·2^k` cells per
/// axis with two Richardson steps for the `h²` and `h⁴` error terms. Only
/// the last levels enter, so coarse levels far from the asymptotic regime
/// do not pollute the estimate.
fn compact_integral(g: &ScalarField2, compact: &Interval2, tol: f64) -> Result<Option<f64>> {
    const LEVELS: usize = 10;
    let mut raw: Vec<f64> = Vec::with_capacity(LEVELS);
    let mut r1: Vec<f64> = Vec::with_capacity(LEVELS);
    let mut r2: Vec<f64> = Vec::with_capacity(LEVELS);
    for k in 0..LEVELS {
        let n = 8usize << k;
        raw.push(riemann_sum(g, compact, n, n, SampleRule::Midpoint, k)?);
        if k >= 1 {
            r1.push((4.0 * raw[k] - raw[k - 1]) / 3.0);
        }
        if k >= 2 {
            let m = r1.len();
            r2.push((16.0 * r1[m - 1] - r1[m - 2]) / 15.0);
        }
        if k >= 3 {
            let m = r2.len();
            let noise = 16.0 * f64::EPSILON * raw[k].abs() * n as f64;
            if (r2[m - 1] - r2[m - 2]).abs() <= tol.max(noise) {
                return Ok(Some(r2[m - 1]));
            }
        }
    }
    Ok(None)
}

fn exhaust(g: &ScalarField2, i: &Interval2, cfg: &ImproperConfig) -> Result<ImproperVerdict> {
    const MAX_LEVELS: usize = 24;
    let maps = (AxisMap::new(i.lower.x1, i.upper.x1), AxisMap::new(i.lower.x2, i.upper.x2));
    let inner = g.clone();
    let g = &ScalarField2::from_outcome_fn(move |p| {
        let (u, du) = maps.0.apply(p.x1);
        let (v, dv) = maps.1.apply(p.x2);
        let x = Point2::try_new(u, v).map_err(|e| DomainError::new(e.to_string()))?;
        Ok(inner.eval(x)? * du * dv)
    });
    let inner_tol = cfg.tol * 1e-2;
    let mut seq = SequenceLimit::new(Acceleration::Epsilon);
    let mut trace = Vec::new();
    for k in 1..=cfg.steps.min(MAX_LEVELS) {
        let compact = exhausting_compact(maps, k)?;
        let v = match compact_integral(g, &compact, inner_tol) {
            Ok(Some(v)) => v,
            Ok(None) => {
                return Ok(ImproperVerdict::Inconclusive {
                    trace,
                    diagnostic: Some(format!("Riemann refinement on {compact} did not converge")),
                })
            }
            Err(Error::Domain(d)) => return Ok(ImproperVerdict::inconclusive(format!("integrand: {d}"))),
            Err(e) => return Err(e),
        };
        let est = seq.push(v, inner_tol);
        trace.push(TraceEntry {
            step: StepParam::Scalar(0.5f64.powi(k as i32)),
            estimate: est,
        });
        if let Some((b, value, err)) = seq.best() {
            if k >= 4 && b + 1 == seq.len() && err <= cfg.tol {
                return Ok(ImproperVerdict::Convergent {
                    value,
                    corner_limits: None,
                });
            }
        }
    }
    Ok(ImproperVerdict::Inconclusive {
        trace,
        diagnostic: Some("exhausting sequence did not settle".into()),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::integral::improper::open_interval;

    fn field(src: &str) -> ScalarField2 {
        ScalarField2::parse(src).unwrap()
    }

    fn spec(h1: &str, h2: &str, a: (f64, f64), b: (f64, f64)) -> CovSpec {
        CovSpec {
            map: (field(h1), field(h2)),
            jacobian: Jacobian::default(),
            param_interval: open_interval(a, b).unwrap(),
        }
    }

    #[test]
    fn product_over_triangle() {
        let s = spec("u", "u*v", (0.0, 0.0), (1.0, 1.0));
        let r = change_of_variables_integral(&field("x1*x2"), &s, Some(&field("u^4*v^2/8")), &ImproperConfig::default()).unwrap();
        assert!((r.verdict.value().unwrap() - 0.125).abs() < 1e-6, "{r:?}");
        assert!(r.primitive_residual.unwrap() < 1e-6);
    }

    #[test]
    fn exhausting_sequence_without_primitive() {
        let s = spec("u", "u*v", (0.0, 0.0), (1.0, 1.0));
        let r = change_of_variables_integral(&field("x1*x2"), &s, None, &ImproperConfig::default()).unwrap();
        assert!((r.verdict.value().unwrap() - 0.125).abs() < 1e-6, "{r:?}");
        // Unbounded: e^{-x1^2} over the wedge |x2| < x1.
        let s = spec("u", "u*v", (0.0, -1.0), (f64::INFINITY, 1.0));
        let r = change_of_variables_integral(&field("exp(-x1^2)"), &s, None, &ImproperConfig::default()).unwrap();
        assert!((r.verdict.value().unwrap() - 1.0).abs() < 1e-4, "{r:?}");
    }

    #[test]
    fn analytic_jacobian() {
        let mut s = spec("u", "u*v", (0.0, 0.0), (1.0, 1.0));
        s.jacobian = Jacobian::Analytic(field("u"));
        let g = pullback(&field("x1*x2"), &s);
        assert!((g.at(0.5, 0.5).unwrap() - 0.5 * 0.25 * 0.5).abs() < 1e-15);
    }

    #[test]
    fn degenerate_map() {
        let s = spec("u + v", "u + v", (0.0, 0.0), (1.0, 1.0));
        let r = change_of_variables_integral(&field("1"), &s, None, &ImproperConfig::default()).unwrap();
        assert_eq!(r.verdict.label(), "inconclusive");
    }
}
