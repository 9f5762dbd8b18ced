use serde::{Deserialize, Serialize};

use super::limit::approach;
use crate::accel::Acceleration;
use crate::difference::delta2_noisy;
use crate::domain::{EstimateReport, Point2, QuadrantSign, ScalarField2, StepParam, Verdict};
use crate::error::Result;
use crate::net::{run_families, summarize, FamilyLimit, NetConfig};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DerivConfig {
    pub steps: usize,
    pub tol: f64,
    /// Initial net parameter; capped by the room left in the domain hint.
    pub initial: f64,
    /// Bound on the first-order residual `ρ` for a converged estimate.
    pub residual_tol: f64,
}

impl Default for DerivConfig {
    fn default() -> Self {
        DerivConfig {
            steps: 40,
            tol: 1e-6,
            initial: 0.125,
            residual_tol: 1e-3,
        }
    }
}

impl DerivConfig {
    pub fn with_tol(tol: f64) -> Self {
        DerivConfig {
            tol,
            ..Default::default()
        }
    }
}

/// One signed limit of the mean slope.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SignedEstimate {
    pub sign: QuadrantSign,
    pub verdict: Verdict,
    pub value: f64,
    pub residual: f64,
    pub families: Vec<FamilyLimit>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DerivEstimate {
    pub report: EstimateReport,
    pub sign: Option<QuadrantSign>,
    /// `|Δ_a^x(f) − (x1−a1)(x2−a2)·f′(a)| / |(x1−a1)(x2−a2)|` at a net
    /// point `x` about `2^-14` of the initial step away from `a`.
    pub first_order_residual: f64,
    pub signed: Vec<SignedEstimate>,
}

impl DerivEstimate {
    pub fn value(&self) -> Option<f64> {
        self.report.converged_value()
    }

    /// Best available estimate, converged or not.
    pub fn best_estimate(&self) -> f64 {
        self.report
            .value
            .unwrap_or_else(|| self.signed.first().map_or(f64::NAN, |s| s.value))
    }
}

/// Net step at which the first-order residual is measured. Far enough in
/// that the `O(|x−a|)` term is small, not so far that the mean slope is
/// swamped by cancellation.
const RHO_STEP: i32 = 14;

fn initial_step(f: &ScalarField2, a: Point2, sign: QuadrantSign, initial: f64) -> f64 {
    // The skewed families move up to 2t along one axis.
    match f.domain_hint() {
        Some(hint) if hint.contains(a) => {
            let (r1, r2) = hint.room(a, sign);
            initial.min(r1.min(r2) / 2.5)
        }
        _ => initial,
    }
}

fn signed_estimate(f: &ScalarField2, a: Point2, sign: QuadrantSign, cfg: &DerivConfig) -> Result<(SignedEstimate, EstimateReport)> {
    let net = NetConfig {
        steps: cfg.steps,
        tol: cfg.tol,
        initial: initial_step(f, a, sign, cfg.initial),
        acceleration: Acceleration::Richardson,
        divergence_factor: 10.0,
    };
    let mut evaluations = 0usize;
    let families = run_families(&net, |w, t| {
        let x = approach(a.into(), sign, w, t, (1.0, 1.0));
        let (delta, noise) = delta2_noisy(f, a, x)?;
        evaluations += 4;
        let area = (x.x1 - a.x1) * (x.x2 - a.x2);
        Ok(crate::net::NetSample {
            value: delta / area,
            noise: noise / area.abs(),
            step: StepParam::Point(x),
        })
    })?;
    let out = summarize(&net, families, evaluations);
    let value = out.report.value.unwrap_or(out.families[0].estimate);
    Ok((
        SignedEstimate {
            sign,
            verdict: out.report.verdict,
            value,
            residual: out.report.residual,
            families: out.families,
        },
        out.report,
    ))
}

/// Double derivative `f′(a) = lim_{x⇝a} m_a^x(f)`.
///
/// With a sign only that quadrant is probed. Without one, every quadrant
/// admitted by the field's domain hint (all four when there is none) is
/// probed and the estimates must agree within `tol`.
pub fn double_derivative(
    f: &ScalarField2,
    a: Point2,
    sign: Option<QuadrantSign>,
    cfg: &DerivConfig,
) -> Result<DerivEstimate> {
    let signs = match (sign, f.domain_hint()) {
        (Some(s), _) => vec![s],
        (None, Some(hint)) if hint.contains(a) => hint.applicable_signs(a),
        (None, _) => QuadrantSign::ALL.to_vec(),
    };
    let mut signed = Vec::with_capacity(signs.len());
    let mut reports = Vec::with_capacity(signs.len());
    for s in signs {
        let (est, report) = signed_estimate(f, a, s, cfg)?;
        signed.push(est);
        reports.push(report);
    }

    let evaluations = reports.iter().map(|r| r.evaluations).sum();
    let all_converged = signed.iter().all(|s| s.verdict == Verdict::Converged);
    let lo = signed.iter().map(|s| s.value).fold(f64::INFINITY, f64::min);
    let hi = signed.iter().map(|s| s.value).fold(f64::NEG_INFINITY, f64::max);
    let spread = hi - lo;
    let max_res = signed.iter().map(|s| s.residual).fold(0.0, f64::max);
    let first = reports.swap_remove(0);
    let lead = signed[0].value;

    let first_order_residual = {
        let s0 = signed[0].sign;
        let t = initial_step(f, a, s0, cfg.initial) * 0.5f64.powi(RHO_STEP);
        let x = approach(a.into(), s0, (1.0, 1.0), t, (1.0, 1.0));
        let area = (x.x1 - a.x1) * (x.x2 - a.x2);
        let (delta, _) = delta2_noisy(f, a, x)?;
        ((delta - area * lead) / area).abs()
    };

    let mut verdict = if all_converged && spread <= cfg.tol {
        Verdict::Converged
    } else if (signed.iter().filter(|s| s.verdict == Verdict::Converged).count() >= 2 && spread > 10.0 * cfg.tol)
        || signed.iter().any(|s| s.verdict == Verdict::Diverged)
    {
        Verdict::Diverged
    } else {
        Verdict::Inconclusive
    };
    if verdict == Verdict::Converged && !(first_order_residual <= cfg.residual_tol) {
        verdict = Verdict::Inconclusive;
    }
    let report = EstimateReport {
        value: (verdict == Verdict::Converged).then_some(lead),
        verdict,
        residual: if verdict == Verdict::Converged {
            max_res.max(spread)
        } else {
            first.residual.max(spread)
        },
        trace: first.trace,
        evaluations,
    };
    Ok(DerivEstimate {
        report,
        sign,
        first_order_residual,
        signed,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::domain::Interval2;

    fn field(src: &str) -> ScalarField2 {
        ScalarField2::parse(src).unwrap()
    }

    fn dd(src: &str, a: Point2) -> DerivEstimate {
        double_derivative(&field(src), a, None, &DerivConfig::default()).unwrap()
    }

    #[test]
    fn polynomial_primitive() {
        let d = dd("x1^2*x2^3/2", Point2::new(1.0, 1.0));
        assert!((d.value().unwrap() - 3.0).abs() < 1e-9, "{d:?}");
        assert!(d.first_order_residual < 1e-3);
        let last = d.report.last_estimate().unwrap();
        assert!((last - d.value().unwrap()).abs() <= d.report.residual);
    }

    #[test]
    fn separable_and_bilinear() {
        assert!(dd("x1^2 + sin(x2)", Point2::new(0.4, -1.0)).value().unwrap().abs() < 1e-9);
        let d = dd("2*(x1-1)*(x2+3)", Point2::new(5.0, 2.0));
        assert!((d.value().unwrap() - 2.0).abs() < 1e-9);
    }

    #[test]
    fn transcendental() {
        // f12 of sin(x1 x2) is cos(x1 x2) − x1 x2 sin(x1 x2).
        let a = Point2::new(0.7, -0.3);
        let p = a.x1 * a.x2;
        let d = dd("sin(x1*x2)", a);
        assert!((d.value().unwrap() - (p.cos() - p * p.sin())).abs() < 1e-8);
    }

    #[test]
    fn signed_quadrants() {
        let f = field("if(x1>0, if(x2>0, x1*x2, 0), 0)");
        let cfg = DerivConfig::default();
        let pp = double_derivative(&f, Point2::ORIGIN, Some(QuadrantSign::PP), &cfg).unwrap();
        let mm = double_derivative(&f, Point2::ORIGIN, Some(QuadrantSign::MM), &cfg).unwrap();
        assert!((pp.value().unwrap() - 1.0).abs() < 1e-9);
        assert!(mm.value().unwrap().abs() < 1e-9);
        let both = double_derivative(&f, Point2::ORIGIN, None, &cfg).unwrap();
        assert_eq!(both.report.verdict, Verdict::Diverged);
        assert!(both.value().is_none());
    }

    #[test]
    fn boundary_point_uses_inward_signs() {
        let f = field("x1*x2^2").with_domain_hint(Interval2::square(0.0, 1.0));
        let d = double_derivative(&f, Point2::new(0.0, 0.5), None, &DerivConfig::default()).unwrap();
        let signs: Vec<_> = d.signed.iter().map(|s| s.sign).collect();
        assert_eq!(signs, vec![QuadrantSign::PP, QuadrantSign::PM]);
        assert!((d.value().unwrap() - 1.0).abs() < 1e-9);
    }

    #[test]
    fn first_order_residual_shrinks() {
        let f = field("exp(x1)*cos(x2)");
        let a = Point2::new(0.2, 0.1);
        let d = double_derivative(&f, a, Some(QuadrantSign::PM), &DerivConfig::default()).unwrap();
        let v = d.value().unwrap();
        let rho = |t: f64| {
            let x = Point2::new(a.x1 + t, a.x2 - t);
            (crate::difference::mean_slope(&f, a, x).unwrap() - v).abs()
        };
        assert!(rho(1e-2) > rho(1e-3) && rho(1e-3) > rho(1e-4));
    }
}
