use crate::derivative::{mvt_solve, MeanValueResult, SolverConfig};
use crate::difference::delta2;
use crate::domain::{Interval2, Point2, ScalarField2};
use crate::error::{Error, Result};

/// Double Newton integral `∫_a^b f = Δ_a^b(F)` for a double primitive `F`.
pub fn newton_integral(primitive: &ScalarField2, a: Point2, b: Point2) -> Result<f64> {
    delta2(primitive, a, b)
}

/// `G(x) = ∫_a^x f = Δ_a^x(F)`, itself a double primitive of `f` with
/// `G(a) = 0`.
pub fn accumulate_field(primitive: &ScalarField2, a: Point2) -> ScalarField2 {
    let f = primitive.clone();
    let g = ScalarField2::from_outcome_fn(move |x| delta2(&f, a, x).map_err(|e| match e {
        Error::Domain(d) => d,
        other => crate::error::DomainError::new(other.to_string()),
    }));
    match primitive.domain_hint() {
        Some(h) => g.with_domain_hint(*h),
        None => g,
    }
}

/// Mean value theorem for the Newton integral: `c ∈ (a, b)` with
/// `f(c)(b1−a1)(b2−a2) = ∫_a^b f`.
pub fn integral_mean_point(
    f: &ScalarField2,
    primitive: &ScalarField2,
    i: &Interval2,
    cfg: &SolverConfig,
) -> Result<MeanValueResult> {
    let r = mvt_solve(primitive, i, cfg)?;
    let achieved = f.value(r.c)?;
    let residual = (achieved - r.target).abs();
    if !(residual <= cfg.tol) {
        return Err(Error::NonConvergence(format!(
            "f(c) = {achieved} misses the mean {} by {residual:e}; is F a primitive of f?",
            r.target
        )));
    }
    Ok(MeanValueResult {
        c: r.c,
        target: r.target,
        achieved,
        residual,
    })
}
