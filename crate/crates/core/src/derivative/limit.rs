use crate::domain::{ExtendedPoint2, Point2, QuadrantSign, ScalarField2, StepParam};
use crate::error::Result;
use crate::net::{run_families, summarize, NetConfig, NetOutcome, NetSample};

/// Net point at parameter `t` along the path with weights `w` toward `a`
/// from the quadrant `sign`. Finite components move by `w·t·scale`;
/// infinite components are replaced by `±1/(w·t)`.
pub(crate) fn approach(a: ExtendedPoint2, sign: QuadrantSign, w: (f64, f64), t: f64, scale: (f64, f64)) -> Point2 {
    let coord = |target: f64, s: f64, w: f64, scale: f64| {
        if target.is_finite() {
            target + s * w * t * scale
        } else {
            target.signum() / (w * t)
        }
    };
    let d = sign.direction();
    Point2::new(
        coord(a.x1, d.x1, w.0, scale.0),
        coord(a.x2, d.x2, w.1, scale.1),
    )
}

/// Signed double limit of `g` at `a`, possibly at infinity.
///
/// `g` is sampled along the three path families `(s,s)`, `(s,2s)` and
/// `(2s,s)` inside the quadrant selected by `sign` and each sequence is
/// extrapolated. For an infinite component the sign is implied by the
/// target and ignored.
pub fn double_limit(g: &ScalarField2, a: ExtendedPoint2, sign: QuadrantSign, cfg: &NetConfig) -> Result<NetOutcome> {
    let mut evaluations = 0usize;
    let families = run_families(cfg, |w, t| {
        let x = approach(a, sign, w, t, (1.0, 1.0));
        let value = g.value(x)?;
        evaluations += 1;
        Ok(NetSample {
            value,
            noise: 4.0 * f64::EPSILON * value.abs(),
            step: StepParam::Point(x),
        })
    })?;
    Ok(summarize(cfg, families, evaluations))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::domain::Verdict;

    fn field(src: &str) -> ScalarField2 {
        ScalarField2::parse(src).unwrap()
    }

    #[test]
    fn sum_tends_to_zero() {
        let out = double_limit(&field("x1+x2"), Point2::ORIGIN.into(), QuadrantSign::PP, &NetConfig::default()).unwrap();
        assert_eq!(out.report.verdict, Verdict::Converged);
        assert!(out.report.value.unwrap().abs() < 1e-9);
        let last = out.report.last_estimate().unwrap();
        assert!((last - out.report.value.unwrap()).abs() <= out.report.residual);
    }

    #[test]
    fn path_dependent_quotient_is_not_converged() {
        // (s,s) → 1/2, (s,2s) → 2/5.
        let out = double_limit(
            &field("(x1*x2)/(x1^2+x2^2)"),
            Point2::ORIGIN.into(),
            QuadrantSign::PP,
            &NetConfig::default(),
        )
        .unwrap();
        assert_eq!(out.report.verdict, Verdict::Diverged);
        let w = out.witness.unwrap();
        assert!((w.first.estimate - 0.5).abs() < 1e-9);
        assert!((w.second.estimate - 0.4).abs() < 1e-9);
    }

    #[test]
    fn limit_at_infinity() {
        let a = ExtendedPoint2::new(f64::INFINITY, f64::INFINITY).unwrap();
        let out = double_limit(&field("atan(x1) + 1/x2"), a, QuadrantSign::MM, &NetConfig::default()).unwrap();
        assert_eq!(out.report.verdict, Verdict::Converged);
        assert!((out.report.value.unwrap() - std::f64::consts::FRAC_PI_2).abs() < 1e-8);
    }

    #[test]
    fn domain_error_propagates() {
        let out = double_limit(&field("ln(x1)"), Point2::ORIGIN.into(), QuadrantSign::MP, &NetConfig::default());
        assert!(out.is_err());
    }
}
