//! The double difference operator and what is built directly on it.

mod continuity;

use std::sync::Arc;

pub use continuity::{
    continuity_probe, global_continuity_probe, ContinuityReport, ProbeConfig, ProbeVerdict, SweepAxis,
};

use crate::domain::{EvalOutcome, ExtendedPoint2, Interval2, Point2, ScalarField2, ScalarFieldN};
use crate::error::{Error, Result};

/// Four corner values of `[a, b]` in the order
/// `f(b1,b2), f(a1,a2), f(a1,b2), f(b1,a2)`.
#[inline]
fn corners(f: &ScalarField2, a: Point2, b: Point2) -> Result<[f64; 4]> {
    Ok([
        f.value(b)?,
        f.value(a)?,
        f.value(Point2::new(a.x1, b.x2))?,
        f.value(Point2::new(b.x1, a.x2))?,
    ])
}

/// Positive corners first, then the two negative ones. `delta_n` with
/// `n = 2` performs the same operations in the same order.
#[inline]
fn alternating_sum(c: [f64; 4]) -> f64 {
    ((c[0] + c[1]) - c[3]) - c[2]
}

/// `Δ_a^b(f) = f(b1,b2) − f(b1,a2) − f(a1,b2) + f(a1,a2)`.
pub fn delta2(f: &ScalarField2, a: Point2, b: Point2) -> Result<f64> {
    corners(f, a, b).map(alternating_sum)
}

/// `delta2` together with an estimate of its absolute rounding noise.
pub(crate) fn delta2_noisy(f: &ScalarField2, a: Point2, b: Point2) -> Result<(f64, f64)> {
    let c = corners(f, a, b)?;
    let scale = c.iter().fold(0.0f64, |m, v| m.max(v.abs()));
    Ok((alternating_sum(c), 8.0 * f64::EPSILON * scale))
}

/// `n`-dimensional double difference:
/// `Σ_{s ∈ {0,1}^n} (−1)^{|s|} f(s·a + (1−s)·b)`.
///
/// Positive terms are summed in ascending mask order, negative terms are
/// then subtracted in descending mask order; for `n = 2` this reproduces
/// [`delta2`] bit for bit.
pub fn delta_n(f: &ScalarFieldN, a: &[f64], b: &[f64]) -> Result<f64> {
    let n = f.arity();
    if a.len() != n || b.len() != n {
        return Err(Error::InvalidInput(format!(
            "delta_n needs {n} coordinates per point, got {} and {}",
            a.len(),
            b.len()
        )));
    }
    if n >= usize::BITS as usize - 1 {
        return Err(Error::InvalidInput(format!("arity {n} too large")));
    }
    let mut positive = Vec::with_capacity(1 << (n - 1));
    let mut negative = Vec::with_capacity(1 << (n - 1));
    let mut x = vec![0.0; n];
    for mask in 0usize..(1 << n) {
        for (i, xi) in x.iter_mut().enumerate() {
            *xi = if mask >> i & 1 == 1 { a[i] } else { b[i] };
        }
        let v = f.eval(&x)?;
        if mask.count_ones() % 2 == 0 {
            positive.push(v);
        } else {
            negative.push(v);
        }
    }
    let mut sum = positive[0];
    for v in &positive[1..] {
        sum += v;
    }
    for v in negative.iter().rev() {
        sum -= v;
    }
    Ok(sum)
}

/// Double mean slope `m_a^b(f) = Δ_a^b(f) / ((b1 − a1)(b2 − a2))`.
pub fn mean_slope(f: &ScalarField2, a: Point2, b: Point2) -> Result<f64> {
    if !a.nsim(b) {
        return Err(Error::Degenerate(format!("{a} and {b} share a coordinate")));
    }
    Ok(delta2(f, a, b)? / ((b.x1 - a.x1) * (b.x2 - a.x2)))
}

/// Largest `|Δ_p^q(f)|` over all pairs of an `n × n` lattice on `i`.
pub fn max_lattice_delta(f: &ScalarField2, i: &Interval2, n: usize) -> Result<f64> {
    if !i.is_finite() {
        return Err(Error::InvalidInput(format!("interval {i} must be bounded")));
    }
    let n = n.max(2);
    let pts = i.lattice(n)?;
    let vals = pts.iter().map(|&p| f.value(p)).collect::<Result<Vec<_>>>()?;
    let v = |r: usize, c: usize| vals[r * n + c];
    let mut worst = 0.0f64;
    for r0 in 0..n {
        for c0 in 0..n {
            for r1 in 0..n {
                for c1 in 0..n {
                    let d = ((v(r1, c1) + v(r0, c0)) - v(r1, c0)) - v(r0, c1);
                    worst = worst.max(d.abs());
                }
            }
        }
    }
    Ok(worst)
}

/// Sampled test of `Δ_a^b(f) = 0` for all `a, b ∈ i`: every pair of a
/// `grid × grid` lattice must have `|Δ| ≤ tol`.
pub fn is_double_constant(f: &ScalarField2, i: &Interval2, grid: usize, tol: f64) -> Result<bool> {
    if grid < 2 {
        return Err(Error::InvalidInput("grid must be at least 2".into()));
    }
    Ok(max_lattice_delta(f, i, grid)? <= tol)
}

type Section = Arc<dyn Fn(f64) -> EvalOutcome + Send + Sync>;

/// `f = g(x1) + h(x2)` around an anchor, with `g(s) = f(s, a2)` and
/// `h(t) = f(a1, t) − f(a1, a2)`.
#[derive(Clone)]
pub struct SplitDecomposition {
    pub base: Point2,
    g: Section,
    h: Section,
}

impl SplitDecomposition {
    pub fn g(&self, s: f64) -> EvalOutcome {
        (self.g)(s)
    }

    pub fn h(&self, t: f64) -> EvalOutcome {
        (self.h)(t)
    }

    /// `g(x1) + h(x2)`.
    pub fn reconstruct(&self, p: Point2) -> EvalOutcome {
        Ok(self.g(p.x1)? + self.h(p.x2)?)
    }

    /// Largest `|f − (g + h)|` on an `n × n` lattice of `i`.
    pub fn max_reconstruction_error(&self, f: &ScalarField2, i: &Interval2, n: usize) -> Result<f64> {
        let mut worst = 0.0f64;
        for p in i.lattice(n)? {
            worst = worst.max((f.value(p)? - self.reconstruct(p)?).abs());
        }
        Ok(worst)
    }
}

impl std::fmt::Debug for SplitDecomposition {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("SplitDecomposition").field("base", &self.base).finish()
    }
}

/// Split a double constant `f` into one-variable parts anchored at
/// `anchor`. Whether `f` really is double constant is the caller's check;
/// otherwise the reconstruction error exposes the violation.
pub fn split_double_constant(f: &ScalarField2, i: &Interval2, anchor: Point2) -> Result<SplitDecomposition> {
    if !i.contains(anchor) {
        return Err(Error::InvalidInput(format!("anchor {anchor} is not in {i}")));
    }
    let f_anchor = f.value(anchor)?;
    let (fg, fh) = (f.clone(), f.clone());
    let Point2 { x1: a1, x2: a2 } = anchor;
    Ok(SplitDecomposition {
        base: anchor,
        g: Arc::new(move |s| fg.eval(Point2::new(s, a2))),
        h: Arc::new(move |t| Ok(fh.eval(Point2::new(a1, t))? - f_anchor)),
    })
}

/// The field `x ↦ Δ_x^{x+h}(f)`. When `f` carries a domain hint the result's
/// hint is shrunk so that `x + h` stays inside it.
pub fn delta_map_field(f: &ScalarField2, h: Point2) -> Result<ScalarField2> {
    if !h.nsim(Point2::ORIGIN) {
        return Err(Error::Degenerate(format!("shift {h} has a zero component")));
    }
    let g = f.clone();
    let field = ScalarField2::from_outcome_fn(move |x| {
        let b = Point2::new(x.x1 + h.x1, x.x2 + h.x2);
        delta2(&g, x, b).map_err(|e| match e {
            Error::Domain(d) => d,
            other => crate::error::DomainError::new(other.to_string()),
        })
    });
    let shrunk = f.domain_hint().and_then(|hint| {
        let lo = ExtendedPoint2 {
            x1: hint.lower.x1 + (-h.x1).max(0.0),
            x2: hint.lower.x2 + (-h.x2).max(0.0),
        };
        let hi = ExtendedPoint2 {
            x1: hint.upper.x1 - h.x1.max(0.0),
            x2: hint.upper.x2 - h.x2.max(0.0),
        };
        Interval2::new(lo, hi, hint.closed).ok()
    });
    Ok(match shrunk {
        Some(hint) => field.with_domain_hint(hint),
        None => field,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn field(src: &str) -> ScalarField2 {
        ScalarField2::parse(src).unwrap()
    }

    fn p(x1: f64, x2: f64) -> Point2 {
        Point2::new(x1, x2)
    }

    #[test]
    fn delta2_examples() {
        assert_eq!(delta2(&field("x1*x2"), p(0.0, 0.0), p(1.0, 1.0)).unwrap(), 1.0);
        let sep = field("x1^2 + sin(x2)");
        assert!(delta2(&sep, p(-0.3, 1.7), p(2.2, -0.4)).unwrap().abs() < 1e-15);
        let exa = field("2*(x1-1)*(x2-1)");
        assert_eq!(delta2(&exa, p(0.0, 0.0), p(3.0, 4.0)).unwrap(), 24.0);
    }

    #[test]
    fn delta_n_examples() {
        let f3 = ScalarFieldN::parse("x1*x2*x3", 3).unwrap();
        assert_eq!(delta_n(&f3, &[0.0; 3], &[1.0; 3]).unwrap(), 1.0);
        let f2 = field("x1^2*x2");
        let n2 = f2.to_field_n();
        let a = p(1.0, 2.0);
        let b = p(3.0, 5.0);
        assert_eq!(
            delta_n(&n2, &a.to_array(), &b.to_array()).unwrap().to_bits(),
            delta2(&f2, a, b).unwrap().to_bits()
        );
        let sep = ScalarFieldN::parse("x1+x2+x3", 3).unwrap();
        assert_eq!(delta_n(&sep, &[0.5, -1.0, 2.0], &[1.5, 3.0, -2.0]).unwrap(), 0.0);
        assert!(delta_n(&f3, &[0.0; 2], &[1.0; 3]).is_err());
    }

    #[test]
    fn delta_n_three_variable_expansion() {
        // Oracle: the written-out eight-term formula.
        let f = |x: &[f64]| x[0].sin() * x[1] * x[1] + x[2] * x[0] * x[1];
        let field = ScalarFieldN::from_fn(3, f);
        let (a, b) = ([0.2, -0.4, 1.1], [1.3, 0.9, -0.6]);
        let expected = f(&[b[0], b[1], b[2]]) - f(&[a[0], b[1], b[2]]) - f(&[b[0], a[1], b[2]])
            - f(&[b[0], b[1], a[2]])
            + f(&[a[0], a[1], b[2]])
            + f(&[a[0], b[1], a[2]])
            + f(&[b[0], a[1], a[2]])
            - f(&[a[0], a[1], a[2]]);
        assert!((delta_n(&field, &a, &b).unwrap() - expected).abs() < 1e-14);
    }

    #[test]
    fn mean_slope_examples() {
        assert_eq!(mean_slope(&field("x1*x2"), p(0.0, 0.0), p(2.0, 3.0)).unwrap(), 1.0);
        let five = field("5*x1*x2");
        assert!((mean_slope(&five, p(-1.0, 2.0), p(0.5, -3.0)).unwrap() - 5.0).abs() < 1e-14);
        assert_eq!(mean_slope(&field("x1^2*x2^3/2"), p(0.0, 1.0), p(2.0, 3.0)).unwrap(), 13.0);
        assert!(matches!(
            mean_slope(&five, p(0.0, 0.0), p(0.0, 1.0)),
            Err(Error::Degenerate(_))
        ));
    }

    #[test]
    fn double_constant_examples() {
        let unit = Interval2::square(0.0, 1.0);
        assert!(is_double_constant(&field("x1^2 + 7*sin(x2)"), &unit, 9, 1e-12).unwrap());
        assert!(!is_double_constant(&field("x1*x2"), &unit, 9, 1e-12).unwrap());
        assert!(is_double_constant(&field("if(x2>0.5, x1, x1)"), &unit, 9, 1e-12).unwrap());
    }

    #[test]
    fn split_examples() {
        let unit = Interval2::square(0.0, 1.0);
        let f = field("x1^2+sin(x2)");
        let split = split_double_constant(&f, &unit, Point2::ORIGIN).unwrap();
        assert_eq!(split.g(0.5).unwrap(), 0.25);
        assert!((split.h(0.5).unwrap() - 0.5f64.sin()).abs() < 1e-16);
        assert!(split.max_reconstruction_error(&f, &unit, 9).unwrap() < 1e-15);

        let k = field("5");
        let split = split_double_constant(&k, &Interval2::square(0.0, 2.0), p(1.0, 1.0)).unwrap();
        assert_eq!(split.g(0.3).unwrap(), 5.0);
        assert_eq!(split.h(1.7).unwrap(), 0.0);

        let xy = field("x1*x2");
        let split = split_double_constant(&xy, &unit, Point2::ORIGIN).unwrap();
        let err = (xy.value(p(1.0, 1.0)).unwrap() - split.reconstruct(p(1.0, 1.0)).unwrap()).abs();
        assert_eq!(err, 1.0);

        assert!(split_double_constant(&xy, &unit, p(2.0, 0.0)).is_err());
    }

    #[test]
    fn delta_map_examples() {
        let g = delta_map_field(&field("x1*x2"), p(1.0, 1.0)).unwrap();
        assert!((g.at(0.3, -2.0).unwrap() - 1.0).abs() < 1e-15);
        let g = delta_map_field(&field("x1^2 + cos(x2)"), p(0.5, 2.0)).unwrap();
        assert!(g.at(1.0, 1.0).unwrap().abs() < 1e-15);
        // Oracle: (x1+1)^2 (x2+1) − (x1+1)^2 x2 − x1^2 (x2+1) + x1^2 x2 = 2 x1 + 1.
        let g = delta_map_field(&field("x1^2*x2"), p(1.0, 1.0)).unwrap();
        for x1 in [-2.0, 0.0, 0.75, 3.0] {
            assert!((g.at(x1, 0.4).unwrap() - (2.0 * x1 + 1.0)).abs() < 1e-13);
        }
        assert!(delta_map_field(&field("x1"), p(0.0, 1.0)).is_err());
    }

    #[test]
    fn delta_map_shrinks_hint() {
        let f = field("x1*x2").with_domain_hint(Interval2::square(0.0, 1.0));
        let g = delta_map_field(&f, p(0.25, -0.5)).unwrap();
        let hint = g.domain_hint().unwrap();
        assert_eq!((hint.lower.x1, hint.upper.x1), (0.0, 0.75));
        assert_eq!((hint.lower.x2, hint.upper.x2), (0.5, 1.0));
    }
}
