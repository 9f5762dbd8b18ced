//! Both fundamental theorems as numerical checks.

use serde::{Deserialize, Serialize};

use super::newton::newton_integral;
use super::riemann::{riemann_integral, riemann_sum, RiemannConfig, SampleRule};
use crate::accel::Acceleration;
use crate::derivative::approach;
use crate::domain::{Interval2, Point2, QuadrantSign, ScalarField2, StepParam, Verdict};
use crate::error::Result;
use crate::net::{run_families, summarize, NetConfig, NetSample};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FtcPoint {
    pub point: Point2,
    pub signs: Vec<QuadrantSign>,
    /// `f(point)`.
    pub expected: f64,
    /// Signed derivative estimates of `G`, in the order of `signs`.
    pub estimates: Vec<Option<f64>>,
    pub residual: f64,
    pub passed: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Ftc1Report {
    pub passed: bool,
    pub points: Vec<FtcPoint>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub diagnostic: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Ftc2Report {
    /// Riemann estimate, `NaN` if refinement did not converge.
    pub riemann: f64,
    pub newton: f64,
    pub agree: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub diagnostic: Option<String>,
}

/// Cells per axis for the Riemann mean over a shrinking box.
const BOX_CELLS: usize = 4;

/// Interior sample points: a lattice of cell centres in `x1` with a
/// golden-ratio sequence in `x2`, followed by the four edge midpoints and
/// the four corners.
fn check_points(a: Point2, b: Point2, n: usize) -> Vec<Point2> {
    const GOLDEN: f64 = 0.618_033_988_749_894_9;
    let mut out = Vec::with_capacity(n + 8);
    for k in 0..n {
        let s = (k as f64 + 0.5) / n as f64;
        let t = ((k as f64 + 1.0) * GOLDEN).fract() * 0.9 + 0.05;
        out.push(Point2::new(a.x1 + s * (b.x1 - a.x1), a.x2 + t * (b.x2 - a.x2)));
    }
    let m = a.midpoint(b);
    out.extend([
        Point2::new(a.x1, m.x2),
        Point2::new(b.x1, m.x2),
        Point2::new(m.x1, a.x2),
        Point2::new(m.x1, b.x2),
        a,
        b,
        Point2::new(a.x1, b.x2),
        Point2::new(b.x1, a.x2),
    ]);
    out
}

/// First fundamental theorem: `G(x) = ∬_{[a,x]} f` is double differentiable
/// with `G′ = f`.
///
/// The mean slope `m_p^x(G)` is the Riemann mean of `f` over the box
/// between `p` and `x` (additivity of the integral), which is sampled on a
/// fixed midpoint grid and driven to the limit along the approach net. At
/// boundary points only the inward quadrants are checked.
pub fn ftc1_check(f: &ScalarField2, i: &Interval2, sample_points: usize, tol: f64) -> Result<Ftc1Report> {
    let (a, b) = i.bounds()?;
    let closed = Interval2::closed(a, b)?;
    let net = NetConfig {
        tol,
        acceleration: Acceleration::Richardson,
        ..NetConfig::default()
    };
    let mut points = Vec::new();
    let mut diagnostic = None;
    for p in check_points(a, b, sample_points) {
        let expected = f.value(p)?;
        let signs = closed.applicable_signs(p);
        let mut estimates = Vec::with_capacity(signs.len());
        let mut residual: f64 = 0.0;
        for &s in &signs {
            let (r1, r2) = closed.room(p, s);
            let scale = (r1.min(1.0), r2.min(1.0));
            let mut evaluations = 0usize;
            let families = run_families(&net, |w, t| {
                let x = approach(p.into(), s, w, t, scale);
                let (lo, hi) = (Point2::new(p.x1.min(x.x1), p.x2.min(x.x2)), Point2::new(p.x1.max(x.x1), p.x2.max(x.x2)));
                let cell = Interval2::closed(lo, hi)?;
                let area = cell.area();
                let mean = riemann_sum(f, &cell, BOX_CELLS, BOX_CELLS, SampleRule::Midpoint, 0)? / area;
                evaluations += BOX_CELLS * BOX_CELLS;
                Ok(NetSample {
                    value: mean,
                    noise: 4.0 * f64::EPSILON * mean.abs(),
                    step: StepParam::Point(x),
                })
            })?;
            let out = summarize(&net, families, evaluations);
            match out.report.converged_value() {
                Some(v) => {
                    residual = residual.max((v - expected).abs());
                    estimates.push(Some(v));
                }
                None => {
                    residual = f64::INFINITY;
                    estimates.push(None);
                    diagnostic.get_or_insert_with(|| format!("signed derivative {s} of G did not converge at {p}"));
                }
            }
        }
        points.push(FtcPoint {
            point: p,
            signs,
            expected,
            estimates,
            residual,
            passed: residual <= tol,
        });
    }
    Ok(Ftc1Report {
        passed: points.iter().all(|p| p.passed),
        points,
        diagnostic,
    })
}

/// Second fundamental theorem: the Riemann integral of `f` over `i` equals
/// the Newton integral `Δ(F)` for a double primitive `F`.
pub fn ftc2_check(f: &ScalarField2, primitive: &ScalarField2, i: &Interval2, cfg: &RiemannConfig) -> Result<Ftc2Report> {
    let (a, b) = i.bounds()?;
    let newton = newton_integral(primitive, a, b)?;
    let report = riemann_integral(f, i, cfg)?;
    Ok(match report.verdict {
        Verdict::Converged => {
            let riemann = report.value.expect("converged report has a value");
            Ftc2Report {
                riemann,
                newton,
                agree: (riemann - newton).abs() <= cfg.tol * newton.abs().max(1.0),
                diagnostic: None,
            }
        }
        _ => Ftc2Report {
            riemann: f64::NAN,
            newton,
            agree: false,
            diagnostic: Some(format!(
                "Riemann refinement did not converge in {} levels (last step {:e})",
                cfg.max_refinements, report.residual
            )),
        },
    })
}
