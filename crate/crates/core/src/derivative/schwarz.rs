use serde::{Deserialize, Serialize};

use super::estimate::{double_derivative, DerivConfig};
use crate::accel::{Acceleration, SequenceLimit};
use crate::domain::{Point2, ScalarField2};
use crate::error::Result;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MixedPartials {
    /// `∂2(∂1 f)`: the inner derivative is taken in `x1`.
    pub f12: f64,
    /// `∂1(∂2 f)`.
    pub f21: f64,
    /// Double derivative, `NaN` when it did not converge.
    pub dd: f64,
    pub agree: bool,
}

fn unit(axis: usize) -> Point2 {
    if axis == 0 {
        Point2::new(1.0, 0.0)
    } else {
        Point2::new(0.0, 1.0)
    }
}

/// Extrapolated central difference along `axis`. Returns the estimate and
/// its error estimate.
fn partial<F>(mut g: F, x: Point2, axis: usize, h0: f64, steps: usize) -> Result<(f64, f64)>
where
    F: FnMut(Point2) -> Result<(f64, f64)>,
{
    let e = unit(axis);
    let mut seq = SequenceLimit::new(Acceleration::Richardson);
    for k in 0..steps.max(2) {
        let h = h0 * 0.5f64.powi(k as i32);
        let (hi, ehi) = g(x + e * h)?;
        let (lo, elo) = g(x - e * h)?;
        let noise = (ehi + elo + f64::EPSILON * hi.abs().max(lo.abs())) / (2.0 * h);
        seq.push((hi - lo) / (2.0 * h), noise);
        if seq.stalled() {
            break;
        }
    }
    let (_, v, err) = seq.best().expect("nonempty");
    Ok((v, err))
}

fn nested(f: &ScalarField2, a: Point2, inner: usize, h0: f64, steps: usize) -> Result<f64> {
    const INNER_STEPS: usize = 16;
    let inner_fn = |x: Point2| {
        partial(|p| Ok((f.value(p)?, 0.0)), x, inner, h0 / 2.0, INNER_STEPS.min(steps))
    };
    Ok(partial(inner_fn, a, 1 - inner, h0, steps)?.0)
}

/// Estimate `f12`, `f21` and `f′(a)` independently and report whether all
/// three agree within `tol`.
pub fn mixed_partials_check(f: &ScalarField2, a: Point2, h0: f64, steps: usize, tol: f64) -> Result<MixedPartials> {
    let steps = steps.clamp(2, 24);
    let f12 = nested(f, a, 0, h0, steps)?;
    let f21 = nested(f, a, 1, h0, steps)?;
    let dd = double_derivative(f, a, None, &DerivConfig::with_tol(tol))?
        .value()
        .unwrap_or(f64::NAN);
    let agree = (f12 - f21).abs() <= tol && (dd - f12).abs() <= tol && (dd - f21).abs() <= tol;
    Ok(MixedPartials { f12, f21, dd, agree })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn check(src: &str, a: Point2) -> MixedPartials {
        mixed_partials_check(&ScalarField2::parse(src).unwrap(), a, 0.125, 20, 1e-6).unwrap()
    }

    #[test]
    fn polynomial() {
        let m = check("x1^2*x2^3/2", Point2::new(2.0, 1.0));
        assert!(m.agree, "{m:?}");
        assert!((m.f12 - 6.0).abs() < 1e-7);
    }

    #[test]
    fn sine_of_product_at_origin() {
        let m = check("sin(x1*x2)", Point2::ORIGIN);
        assert!(m.agree, "{m:?}");
        assert!((m.dd - 1.0).abs() < 1e-7);
    }

    #[test]
    fn separable() {
        let m = check("x1^2+x2^2", Point2::new(-0.3, 0.8));
        assert!(m.agree);
        assert!(m.f12.abs() < 1e-7 && m.f21.abs() < 1e-7);
    }

    #[test]
    fn quadrant_kink_disagrees() {
        let m = check("if(x1>0, if(x2>0, x1*x2, 0), 0)", Point2::ORIGIN);
        assert!(!m.agree);
        assert!(m.dd.is_nan());
    }
}
