//! Monotonicity, double critical points and the first derivative test.

use std::f64::consts::FRAC_PI_2;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::estimate::{double_derivative, DerivConfig};
use crate::domain::{Interval2, Point2, ScalarField2};
use crate::error::Result;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Monotonicity {
    DoubleIncreasing,
    DoubleDecreasing,
    DoubleConstant,
    Mixed,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MonotonicityReport {
    pub class: Monotonicity,
    pub min_derivative: f64,
    pub max_derivative: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub diagnostic: Option<String>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum CriticalKind {
    Stationary,
    Nondifferentiable,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Classification {
    DoubleMax,
    DoubleMin,
    Neither,
    Unknown,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CriticalPoint {
    pub location: Point2,
    pub kind: CriticalKind,
    pub classification: Classification,
    /// `f′(location)`, `NaN` when nondifferentiable.
    pub derivative: f64,
    /// Stationarity tolerance the point was accepted with.
    pub tol: f64,
}

/// Derivative at each point, `None` where it does not converge.
fn derivatives(f: &ScalarField2, points: &[Point2], cfg: &DerivConfig) -> Result<Vec<Option<(f64, f64)>>> {
    points
        .par_iter()
        .map(|&p| {
            let d = double_derivative(f, p, None, cfg)?;
            Ok(d.value().map(|v| (v, d.report.residual)))
        })
        .collect()
}

/// Classify `f` on `i` by the sign of `f′` on an interior grid.
pub fn monotonicity_classify(f: &ScalarField2, i: &Interval2, grid: usize, tol: f64) -> Result<MonotonicityReport> {
    let points = i.cell_centers(grid.max(1), grid.max(1))?;
    let ds = derivatives(f, &points, &DerivConfig::with_tol(tol))?;
    let mut min = f64::INFINITY;
    let mut max = f64::NEG_INFINITY;
    for (p, d) in points.iter().zip(&ds) {
        match d {
            Some((v, _)) => {
                min = min.min(*v);
                max = max.max(*v);
            }
            None => {
                return Ok(MonotonicityReport {
                    class: Monotonicity::Mixed,
                    min_derivative: min,
                    max_derivative: max,
                    diagnostic: Some(format!("double derivative did not converge at {p}")),
                })
            }
        }
    }
    let class = if min > tol {
        Monotonicity::DoubleIncreasing
    } else if max < -tol {
        Monotonicity::DoubleDecreasing
    } else if min >= -tol && max <= tol {
        Monotonicity::DoubleConstant
    } else {
        Monotonicity::Mixed
    };
    Ok(MonotonicityReport {
        class,
        min_derivative: min,
        max_derivative: max,
        diagnostic: None,
    })
}

/// Sectors around `c`, in the order lower-left `(a,c)`, upper-right
/// `(c,b)`, upper-left and lower-right.
const SECTORS: [(f64, f64); 4] = [(-1.0, -1.0), (1.0, 1.0), (-1.0, 1.0), (1.0, -1.0)];
const RADII: [f64; 3] = [0.25, 0.5, 0.75];

/// First derivative test: the sign of `f′` on the four open sectors
/// around `c` inside `i`.
pub fn classify_stationary(f: &ScalarField2, c: Point2, i: &Interval2, samples: usize, tol: f64) -> Result<Classification> {
    let (a, b) = i.bounds()?;
    let samples = samples.max(1);
    let mut signs = [0i8; 4];
    for (k, &(s1, s2)) in SECTORS.iter().enumerate() {
        let r1 = if s1 > 0.0 { b.x1 - c.x1 } else { c.x1 - a.x1 };
        let r2 = if s2 > 0.0 { b.x2 - c.x2 } else { c.x2 - a.x2 };
        if r1 <= 0.0 || r2 <= 0.0 {
            return Ok(Classification::Unknown);
        }
        let points: Vec<Point2> = (0..samples)
            .map(|j| {
                let r = RADII[j % RADII.len()];
                let theta = (j as f64 + 0.5) / samples as f64 * FRAC_PI_2;
                Point2::new(c.x1 + s1 * r * r1 * theta.cos(), c.x2 + s2 * r * r2 * theta.sin())
            })
            .collect();
        let ds = derivatives(f, &points, &DerivConfig::with_tol(tol))?;
        let Some(vals) = ds.into_iter().collect::<Option<Vec<_>>>() else {
            return Ok(Classification::Unknown);
        };
        signs[k] = if vals.iter().all(|(v, _)| *v > tol) {
            1
        } else if vals.iter().all(|(v, _)| *v < -tol) {
            -1
        } else {
            0
        };
    }
    Ok(match signs {
        [-1, -1, 1, 1] => Classification::DoubleMax,
        [1, 1, -1, -1] => Classification::DoubleMin,
        [s, t, u, v] if s != 0 && s == t && t == u && u == v => Classification::Neither,
        _ => Classification::Unknown,
    })
}

/// Sign of a node value, 0 when it cannot be told apart from noise.
fn sign_of(v: Option<(f64, f64)>) -> i8 {
    match v {
        Some((d, err)) if d > err => 1,
        Some((d, err)) if d < -err => -1,
        _ => 0,
    }
}

/// `f′` changes sign across both axes of the cell in the pattern of a
/// double extremum: equal on the diagonal, opposite off it.
fn saddle_pattern(s00: i8, s10: i8, s01: i8, s11: i8) -> bool {
    s00 != 0 && s00 == s11 && s10 == -s00 && s01 == -s00
}

struct Cell {
    lo: Point2,
    hi: Point2,
    /// Values at lo, (hi1, lo2), (lo1, hi2), hi.
    d: [Option<(f64, f64)>; 4],
}

/// Off-centre split so refinement does not land exactly on a symmetric
/// zero of `f′`.
const SPLIT: f64 = 0.5 + 1.0 / 64.0;
const MIN_CELL: f64 = 1e-9;

fn refine(f: &ScalarField2, mut cell: Cell, cfg: &DerivConfig) -> Result<Point2> {
    let scale = (cell.hi - cell.lo).x1.abs().max((cell.hi - cell.lo).x2.abs());
    for _ in 0..64 {
        let size = (cell.hi - cell.lo).x1.abs().max((cell.hi - cell.lo).x2.abs());
        let noisy = cell.d.iter().all(|d| matches!(d, Some((v, err)) if v.abs() <= 4.0 * err));
        if size <= MIN_CELL * scale.max(1.0) || noisy {
            break;
        }
        let m = cell.lo.lerp(cell.hi, SPLIT);
        let xs = [cell.lo.x1, m.x1, cell.hi.x1];
        let ys = [cell.lo.x2, m.x2, cell.hi.x2];
        let new_points = [
            Point2::new(xs[1], ys[0]),
            Point2::new(xs[0], ys[1]),
            Point2::new(xs[1], ys[1]),
            Point2::new(xs[2], ys[1]),
            Point2::new(xs[1], ys[2]),
        ];
        let nd = derivatives(f, &new_points, cfg)?;
        // 3×3 node values indexed [ix][iy].
        let mut grid = [[None; 3]; 3];
        grid[0][0] = cell.d[0];
        grid[2][0] = cell.d[1];
        grid[0][2] = cell.d[2];
        grid[2][2] = cell.d[3];
        grid[1][0] = nd[0];
        grid[0][1] = nd[1];
        grid[1][1] = nd[2];
        grid[2][1] = nd[3];
        grid[1][2] = nd[4];
        let mut next = None;
        'search: for ix in 0..2 {
            for iy in 0..2 {
                let q = [grid[ix][iy], grid[ix + 1][iy], grid[ix][iy + 1], grid[ix + 1][iy + 1]];
                if saddle_pattern(sign_of(q[0]), sign_of(q[1]), sign_of(q[2]), sign_of(q[3])) {
                    next = Some(Cell {
                        lo: Point2::new(xs[ix], ys[iy]),
                        hi: Point2::new(xs[ix + 1], ys[iy + 1]),
                        d: q,
                    });
                    break 'search;
                }
            }
        }
        match next {
            Some(c) => cell = c,
            None => {
                // The pattern collapsed onto a node; take the smallest.
                let best = (0..3)
                    .flat_map(|ix| (0..3).map(move |iy| (ix, iy)))
                    .filter_map(|(ix, iy)| grid[ix][iy].map(|(v, _)| (Point2::new(xs[ix], ys[iy]), v.abs())))
                    .min_by(|x, y| x.1.total_cmp(&y.1));
                return Ok(best.map_or(m, |b| b.0));
            }
        }
    }
    Ok(cell.lo.midpoint(cell.hi))
}

/// Double critical points of `f` inside `i`.
///
/// `f′` is evaluated on a `grid × grid` lattice of cell centres. Cells whose
/// corner signs show the double-extremum pattern are refined by
/// subdivision; nodes where `f′` does not converge are reported as
/// nondifferentiable.
pub fn critical_points(f: &ScalarField2, i: &Interval2, grid: usize, tol: f64) -> Result<Vec<CriticalPoint>> {
    const SECTOR_SAMPLES: usize = 16;
    let n = grid.max(2);
    let cfg = DerivConfig::with_tol(tol);
    let nodes = i.cell_centers(n, n)?;
    let ds = derivatives(f, &nodes, &cfg)?;
    let at = |ix: usize, iy: usize| ds[ix * n + iy];
    let node = |ix: usize, iy: usize| nodes[ix * n + iy];

    let mut out: Vec<CriticalPoint> = Vec::new();
    let mut push = |cp: CriticalPoint, spacing: f64| {
        if out.iter().all(|o| o.location.distance(cp.location) > spacing) {
            out.push(cp);
        }
    };
    let spacing = (i.span1() / n as f64).min(i.span2() / n as f64);

    for ix in 0..n {
        for iy in 0..n {
            if at(ix, iy).is_none() {
                push(
                    CriticalPoint {
                        location: node(ix, iy),
                        kind: CriticalKind::Nondifferentiable,
                        classification: Classification::Unknown,
                        derivative: f64::NAN,
                        tol,
                    },
                    spacing,
                );
            }
        }
    }

    for ix in 0..n - 1 {
        for iy in 0..n - 1 {
            let d = [at(ix, iy), at(ix + 1, iy), at(ix, iy + 1), at(ix + 1, iy + 1)];
            let big = d.iter().flatten().any(|(v, _)| v.abs() > tol);
            if !big || !saddle_pattern(sign_of(d[0]), sign_of(d[1]), sign_of(d[2]), sign_of(d[3])) {
                continue;
            }
            let cell = Cell {
                lo: node(ix, iy),
                hi: node(ix + 1, iy + 1),
                d,
            };
            let c = refine(f, cell, &cfg)?;
            let est = double_derivative(f, c, None, &cfg)?;
            let cp = match est.value() {
                Some(v) if v.abs() <= tol => CriticalPoint {
                    location: c,
                    kind: CriticalKind::Stationary,
                    classification: classify_stationary(f, c, i, SECTOR_SAMPLES, tol)?,
                    derivative: v,
                    tol,
                },
                _ => CriticalPoint {
                    location: c,
                    kind: CriticalKind::Nondifferentiable,
                    classification: classify_stationary(f, c, i, SECTOR_SAMPLES, tol)?,
                    derivative: f64::NAN,
                    tol,
                },
            };
            push(cp, spacing);
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn field(src: &str) -> ScalarField2 {
        ScalarField2::parse(src).unwrap()
    }

    #[test]
    fn bilinear_monotonicity() {
        let i = Interval2::square(0.0, 2.0);
        let up = monotonicity_classify(&field("3*(x1-1)*(x2-1)"), &i, 4, 1e-6).unwrap();
        assert_eq!(up.class, Monotonicity::DoubleIncreasing);
        let down = monotonicity_classify(&field("-3*(x1-1)*(x2-1)"), &i, 4, 1e-6).unwrap();
        assert_eq!(down.class, Monotonicity::DoubleDecreasing);
        let flat = monotonicity_classify(&field("x1^2+x2^2"), &i, 4, 1e-6).unwrap();
        assert_eq!(flat.class, Monotonicity::DoubleConstant);
        let mixed = monotonicity_classify(&field("x1^2*x2^2"), &Interval2::square(-1.0, 1.0), 4, 1e-6).unwrap();
        assert_eq!(mixed.class, Monotonicity::Mixed);
    }

    #[test]
    fn sector_test_at_origin() {
        let i = Interval2::square(-1.0, 1.0);
        let max = classify_stationary(&field("-(x1)^2*(x2)^2"), Point2::ORIGIN, &i, 16, 1e-6).unwrap();
        assert_eq!(max, Classification::DoubleMax);
        let min = classify_stationary(&field("x1^2*x2^2"), Point2::ORIGIN, &i, 16, 1e-6).unwrap();
        assert_eq!(min, Classification::DoubleMin);
        let neither = classify_stationary(&field("x1*x2"), Point2::ORIGIN, &i, 16, 1e-6).unwrap();
        assert_eq!(neither, Classification::Neither);
    }

    #[test]
    fn extremum_of_shifted_square_product() {
        let i = Interval2::closed(Point2::new(0.0, 0.0), Point2::new(2.0, 4.0)).unwrap();
        for (src, class) in [
            ("-1*(x1-1)^2*(x2-2)^2", Classification::DoubleMax),
            ("(x1-1)^2*(x2-2)^2", Classification::DoubleMin),
        ] {
            let cps = critical_points(&field(src), &i, 8, 1e-6).unwrap();
            assert_eq!(cps.len(), 1, "{cps:?}");
            assert_eq!(cps[0].kind, CriticalKind::Stationary);
            assert_eq!(cps[0].classification, class);
            assert!(cps[0].location.distance(Point2::new(1.0, 2.0)) < 1e-4, "{cps:?}");
        }
    }

    #[test]
    fn no_critical_points_for_bilinear() {
        assert!(critical_points(&field("x1*x2"), &Interval2::square(-1.0, 1.0), 6, 1e-6).unwrap().is_empty());
    }
}
