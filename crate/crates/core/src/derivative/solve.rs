//! Constructive intermediate value, Rolle and mean value solvers.

use serde::{Deserialize, Serialize};

use super::estimate::{double_derivative, DerivConfig};
use crate::difference::{delta2, mean_slope};
use crate::domain::{Interval2, Point2, ScalarField2};
use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MeanValueResult {
    pub c: Point2,
    pub target: f64,
    pub achieved: f64,
    pub residual: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CauchyResult {
    pub c: Point2,
    /// `f′(c) Δ_a^b(g)`.
    pub lhs: f64,
    /// `g′(c) Δ_a^b(f)`.
    pub rhs: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SolverConfig {
    pub tol: f64,
    pub max_halvings: usize,
    /// Net length of every derivative estimate.
    pub steps: usize,
}

impl Default for SolverConfig {
    fn default() -> Self {
        SolverConfig {
            tol: 1e-6,
            max_halvings: 40,
            steps: 40,
        }
    }
}

impl SolverConfig {
    pub fn with_tol(tol: f64) -> Self {
        SolverConfig {
            tol,
            ..Default::default()
        }
    }

    fn deriv(&self) -> DerivConfig {
        DerivConfig {
            steps: self.steps,
            ..DerivConfig::with_tol(self.tol)
        }
    }
}

const BISECTION_STEPS: usize = 60;

/// Bisect `g` on the segment `p → q` where `g(p)` and `g(q)` have opposite
/// signs. Stops early once `|g| ≤ stop`.
fn bisect_segment<G>(mut g: G, p: Point2, q: Point2, gp: f64, stop: f64, steps: usize) -> Result<(Point2, f64)>
where
    G: FnMut(Point2) -> Result<f64>,
{
    let (mut lo, mut hi) = (0.0, 1.0);
    let mut best = (p, gp);
    let neg_at_lo = gp < 0.0;
    for _ in 0..steps {
        let mid = 0.5 * (lo + hi);
        let x = p.lerp(q, mid);
        let v = g(x)?;
        if v.abs() < best.1.abs() {
            best = (x, v);
        }
        if v.abs() <= stop || v == 0.0 {
            return Ok((x, v));
        }
        if (v < 0.0) == neg_at_lo {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Ok(best)
}

/// A point `c` strictly inside `i` with `f(c) = d` within `tol`.
///
/// Interior cell centres on successively finer grids are searched for
/// `f(a′) < d < f(b′)`, then the segment `a′ → b′` is bisected.
pub fn intermediate_point(f: &ScalarField2, i: &Interval2, d: f64, tol: f64) -> Result<Point2> {
    for n in [2usize, 4, 8, 16, 32] {
        let mut below: Option<(Point2, f64)> = None;
        let mut above: Option<(Point2, f64)> = None;
        for p in i.cell_centers(n, n)? {
            let v = f.value(p)?;
            if (v - d).abs() <= tol {
                return Ok(p);
            }
            if v < d && below.is_none() {
                below = Some((p, v));
            }
            if v > d && above.is_none() {
                above = Some((p, v));
            }
        }
        if let (Some((p, vp)), Some((q, _))) = (below, above) {
            let (c, v) = bisect_segment(|x| Ok(f.value(x)? - d), p, q, vp - d, tol, 200)?;
            if (v).abs() <= tol {
                return Ok(c);
            }
            return Err(Error::NonConvergence(format!(
                "bisection stalled at {c} with |f(c) - d| = {:e}",
                v.abs()
            )));
        }
    }
    Err(Error::NoBracket(format!("no sampled interior values on both sides of {d}")))
}

fn corner_scale(f: &ScalarField2, a: Point2, b: Point2) -> Result<f64> {
    let vals = [
        f.value(a)?,
        f.value(b)?,
        f.value(Point2::new(a.x1, b.x2))?,
        f.value(Point2::new(b.x1, a.x2))?,
    ];
    Ok(vals.iter().fold(0.0f64, |m, v| m.max(v.abs())))
}

/// Box `[p, p + span]` with `Δ_p^{p+span}(f) ≈ 0`, shrunk by halving as in
/// the double Rolle construction.
fn rolle_box(f: &ScalarField2, a: Point2, b: Point2, scale: f64, tol: f64, max_halvings: usize) -> Result<(Point2, Point2)> {
    let mut p = a;
    let mut span = b - a;
    let noise = 16.0 * f64::EPSILON * scale.max(f64::MIN_POSITIVE);
    for _ in 0..max_halvings {
        let h = span * 0.5;
        // Beyond this size the sign of Δ over a sub-box is rounding noise.
        if noise / (h.x1 * h.x2).abs() > tol / 8.0 || h.x1.abs().max(h.x2.abs()) < tol {
            break;
        }
        let g = |x: Point2| delta2(f, x, x + h);
        let anchors = [
            p,
            Point2::new(p.x1, p.x2 + h.x2),
            Point2::new(p.x1 + h.x1, p.x2),
            p + h,
        ];
        let vals = [g(anchors[0])?, g(anchors[1])?, g(anchors[2])?, g(anchors[3])?];

        // Sub-boxes already at Δ ≈ 0: prefer the centred one, then any
        // tiling anchor, so the final point stays away from the edges.
        let centred = p + h * 0.5;
        if g(centred)?.abs() <= noise {
            p = centred;
            span = h;
            continue;
        }
        if let Some(k) = (0..4).find(|&k| vals[k].abs() <= noise) {
            p = anchors[k];
            span = h;
            continue;
        }

        // Adjacent anchors first: their segment runs along one axis.
        const PAIRS: [(usize, usize); 6] = [(0, 1), (0, 2), (1, 3), (2, 3), (0, 3), (1, 2)];
        let Some(&(i, j)) = PAIRS.iter().find(|&&(i, j)| vals[i].signum() != vals[j].signum()) else {
            // The four values sum to ≈ 0 with one sign: they are all noise.
            break;
        };
        let (x, _) = bisect_segment(g, anchors[i], anchors[j], vals[i], 0.0, BISECTION_STEPS)?;
        p = x;
        span = h;
    }
    Ok((p, p + span))
}

/// Find `c` in the box with `|f′(c)| ≤ tol`.
fn polish(f: &ScalarField2, lo: Point2, hi: Point2, cfg: &SolverConfig) -> Result<Option<(Point2, f64)>> {
    const SHRINK: f64 = 0.05;
    const SAMPLES: usize = 3;
    let dcfg = cfg.deriv();
    let d = |x: Point2| -> Result<f64> { Ok(double_derivative(f, x, None, &dcfg)?.best_estimate()) };
    let a = lo.lerp(hi, SHRINK);
    let b = lo.lerp(hi, 1.0 - SHRINK);
    let centre = a.midpoint(b);
    let mut nodes = Vec::with_capacity(SAMPLES * SAMPLES);
    for i in 0..SAMPLES {
        for j in 0..SAMPLES {
            let s = i as f64 / (SAMPLES - 1) as f64;
            let t = j as f64 / (SAMPLES - 1) as f64;
            let x = Point2::new(a.x1 + s * (b.x1 - a.x1), a.x2 + t * (b.x2 - a.x2));
            nodes.push((x, d(x)?));
        }
    }
    let finite: Vec<_> = nodes.iter().filter(|(_, v)| v.is_finite()).copied().collect();
    if let Some(best) = finite
        .iter()
        .filter(|(_, v)| v.abs() <= cfg.tol)
        .min_by(|x, y| x.0.distance(centre).total_cmp(&y.0.distance(centre)))
    {
        return Ok(Some(*best));
    }
    let pos = finite.iter().filter(|(_, v)| *v > 0.0).min_by(|x, y| x.0.distance(centre).total_cmp(&y.0.distance(centre)));
    let neg = finite.iter().filter(|(_, v)| *v < 0.0).min_by(|x, y| x.0.distance(centre).total_cmp(&y.0.distance(centre)));
    if let (Some(&(p, vp)), Some(&(q, _))) = (pos, neg) {
        let (c, v) = bisect_segment(d, p, q, vp, cfg.tol / 2.0, BISECTION_STEPS)?;
        return Ok(Some((c, v)));
    }
    Ok(finite.into_iter().min_by(|x, y| x.1.abs().total_cmp(&y.1.abs())))
}

/// Double Rolle: for `Δ_a^b(f) = 0` find `c ∈ (a, b)` with `f′(c) = 0`.
///
/// The interval is halved repeatedly, each time keeping a sub-box of half
/// the size on which `Δ` vanishes; the four tiling sub-boxes sum to the
/// parent's `Δ`, so either one of them vanishes or two have opposite signs
/// and a vanishing box lies on the segment between their anchors.
pub fn rolle_solve(f: &ScalarField2, i: &Interval2, cfg: &SolverConfig) -> Result<MeanValueResult> {
    let (a, b) = i.bounds()?;
    let scale = corner_scale(f, a, b)?;
    let delta = delta2(f, a, b)?;
    if delta.abs() > cfg.tol * scale.max(1.0) {
        return Err(Error::Hypothesis(format!(
            "Rolle needs a vanishing double difference over {i}, got {delta:e}"
        )));
    }
    let (lo, hi) = rolle_box(f, a, b, scale.max(1.0), cfg.tol, cfg.max_halvings)?;
    let (c, _) = polish(f, lo, hi, cfg)?
        .ok_or_else(|| Error::NonConvergence(format!("no derivative estimate converged in {lo}..{hi}")))?;
    let est = double_derivative(f, c, None, &cfg.deriv())?;
    let achieved = est.best_estimate();
    if !(achieved.abs() <= cfg.tol) || !i.contains_interior(c) {
        return Err(Error::NonConvergence(format!(
            "best point {c} has |f'(c)| = {:e} after {} halvings",
            achieved.abs(),
            cfg.max_halvings
        )));
    }
    Ok(MeanValueResult {
        c,
        target: 0.0,
        achieved,
        residual: achieved.abs(),
    })
}

/// Double Lagrange mean value theorem: `c ∈ (a, b)` with
/// `f′(c) = m_a^b(f)`.
pub fn mvt_solve(f: &ScalarField2, i: &Interval2, cfg: &SolverConfig) -> Result<MeanValueResult> {
    let (a, b) = i.bounds()?;
    let m = mean_slope(f, a, b)?;
    let g = f.sub_scaled(m, &bilinear(a));
    let r = rolle_solve(&g, i, cfg)?;
    let achieved = double_derivative(f, r.c, None, &cfg.deriv())?.best_estimate();
    let residual = (achieved - m).abs();
    if !(residual <= cfg.tol) {
        return Err(Error::NonConvergence(format!(
            "|f'(c) - m| = {residual:e} at {}",
            r.c
        )));
    }
    Ok(MeanValueResult {
        c: r.c,
        target: m,
        achieved,
        residual,
    })
}

/// `(x1 − a1)(x2 − a2)`.
fn bilinear(a: Point2) -> ScalarField2 {
    ScalarField2::from_fn(move |x| (x.x1 - a.x1) * (x.x2 - a.x2))
}

/// Double Cauchy mean value theorem: `c ∈ (a, b)` with
/// `f′(c) Δ_a^b(g) = g′(c) Δ_a^b(f)`.
pub fn cauchy_mvt_solve(f: &ScalarField2, g: &ScalarField2, i: &Interval2, cfg: &SolverConfig) -> Result<CauchyResult> {
    let (a, b) = i.bounds()?;
    let df = delta2(f, a, b)?;
    let dg = delta2(g, a, b)?;
    let g_scale = corner_scale(g, a, b)?.max(1.0);
    let c = if dg.abs() <= cfg.tol * g_scale {
        rolle_solve(g, i, cfg)?.c
    } else {
        let h = f.sub_scaled(df / dg, g);
        // |h′(c)| ≤ tol' gives |lhs − rhs| ≤ tol'·|Δg|.
        let inner = SolverConfig {
            tol: cfg.tol * dg.abs().recip().min(1.0),
            ..*cfg
        };
        rolle_solve(&h, i, &inner)?.c
    };
    let dcfg = cfg.deriv();
    let fp = double_derivative(f, c, None, &dcfg)?.best_estimate();
    let gp = double_derivative(g, c, None, &dcfg)?.best_estimate();
    let (lhs, rhs) = (fp * dg, gp * df);
    if !((lhs - rhs).abs() <= cfg.tol * 1f64.max(lhs.abs()).max(rhs.abs())) {
        return Err(Error::NonConvergence(format!(
            "|lhs - rhs| = {:e} at {c}",
            (lhs - rhs).abs()
        )));
    }
    Ok(CauchyResult { c, lhs, rhs })
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    fn field(src: &str) -> ScalarField2 {
        ScalarField2::parse(src).unwrap()
    }

    #[test]
    fn intermediate_examples() {
        let unit = Interval2::square(0.0, 1.0);
        let c = intermediate_point(&field("x1+x2"), &unit, 1.0, 1e-9).unwrap();
        assert!((c.x1 + c.x2 - 1.0).abs() <= 1e-9);
        let c = intermediate_point(&field("x1*x2"), &unit, 0.25, 1e-9).unwrap();
        assert!((c.x1 * c.x2 - 0.25).abs() <= 1e-9 && unit.contains_interior(c));
        assert!(matches!(
            intermediate_point(&field("x1*x2"), &unit, 2.0, 1e-9),
            Err(Error::NoBracket(_))
        ));
    }

    #[test]
    fn rolle_on_sine_product() {
        let i = Interval2::square(0.0, PI);
        let r = rolle_solve(&field("sin(x1)*sin(x2)"), &i, &SolverConfig::default()).unwrap();
        assert!(r.residual <= 1e-6);
        assert!(i.contains_interior(r.c));
        assert!((r.c.x1.cos() * r.c.x2.cos()).abs() <= 1e-6, "{r:?}");
    }

    #[test]
    fn rolle_hypothesis_gate() {
        let err = rolle_solve(&field("x1*x2"), &Interval2::square(0.0, 1.0), &SolverConfig::default()).unwrap_err();
        assert!(matches!(err, Error::Hypothesis(_)));
    }

    #[test]
    fn rolle_on_separable() {
        let i = Interval2::closed(Point2::new(-1.0, 2.0), Point2::new(3.0, 5.0)).unwrap();
        let r = rolle_solve(&field("x1^2+x2^2"), &i, &SolverConfig::default()).unwrap();
        assert!(r.achieved.abs() <= 1e-6);
    }

    #[test]
    fn mvt_examples() {
        let unit = Interval2::square(0.0, 1.0);
        let r = mvt_solve(&field("x1^2*x2^2"), &unit, &SolverConfig::default()).unwrap();
        assert!((4.0 * r.c.x1 * r.c.x2 - 1.0).abs() <= 1e-5, "{r:?}");
        assert_eq!(r.target, 1.0);
        let r = mvt_solve(&field("7*x1*x2"), &unit, &SolverConfig::default()).unwrap();
        assert!((r.achieved - 7.0).abs() <= 1e-6);
        let r = mvt_solve(&field("cos(x1) + x2^3"), &unit, &SolverConfig::default()).unwrap();
        assert!(r.target.abs() < 1e-12 && r.achieved.abs() <= 1e-6);
    }

    #[test]
    fn cauchy_examples() {
        let unit = Interval2::square(0.0, 1.0);
        let cfg = SolverConfig::default();
        let r = cauchy_mvt_solve(&field("x1^2*x2^2"), &field("x1^2*x2"), &unit, &cfg).unwrap();
        assert!((4.0 * r.c.x1 * r.c.x2 - 2.0 * r.c.x1).abs() <= 1e-5, "{r:?}");
        let swapped = cauchy_mvt_solve(&field("x1^2*x2"), &field("x1^2*x2^2"), &unit, &cfg).unwrap();
        assert!((swapped.lhs - swapped.rhs).abs() <= 1e-6);
        let r = cauchy_mvt_solve(&field("exp(x1)+x2"), &field("x1*x2"), &unit, &cfg).unwrap();
        assert!(r.lhs.abs() <= 1e-6 && r.rhs.abs() < 1e-12);
    }
}
