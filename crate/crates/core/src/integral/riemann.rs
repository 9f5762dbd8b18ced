use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::domain::{EstimateReport, Interval2, Point2, ScalarField2, StepParam, TraceEntry, Verdict};
use crate::error::{Error, Result};

/// Where each cell of the partition is sampled.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SampleRule {
    Midpoint,
    /// Lower-left corner of each cell.
    Corner,
    /// Uniformly random tag inside each cell, reproducible from the seed.
    Random(u64),
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RiemannConfig {
    pub initial_m: usize,
    pub initial_n: usize,
    pub max_refinements: usize,
    pub tol: f64,
    pub sample_rule: SampleRule,
}

impl Default for RiemannConfig {
    fn default() -> Self {
        RiemannConfig {
            initial_m: 1,
            initial_n: 1,
            max_refinements: 12,
            tol: 1e-6,
            sample_rule: SampleRule::Midpoint,
        }
    }
}

/// Below this many terms a plain left-to-right sum is used.
const PAIRWISE_LEAF: usize = 16;

fn pairwise<F>(lo: usize, hi: usize, term: &mut F) -> Result<f64>
where
    F: FnMut(usize) -> Result<f64>,
{
    if hi - lo <= PAIRWISE_LEAF {
        let mut s = 0.0;
        for j in lo..hi {
            s += term(j)?;
        }
        return Ok(s);
    }
    let mid = lo + (hi - lo) / 2;
    Ok(pairwise(lo, mid, term)? + pairwise(mid, hi, term)?)
}

/// Tags of one row of cells: fractions `(θ1, θ2)` of the cell size.
fn row_rng(seed: u64, level: usize, row: usize) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(((level as u64) << 40) ^ row as u64);
    rng
}

/// Riemann sum on the uniform `m × n` partition of a bounded interval.
///
/// Rows (fixed `x1` cell) are summed pairwise in parallel; row totals are
/// then combined pairwise in row order, so the result does not depend on
/// the number of worker threads.
pub fn riemann_sum(f: &ScalarField2, i: &Interval2, m: usize, n: usize, rule: SampleRule, level: usize) -> Result<f64> {
    if m == 0 || n == 0 {
        return Err(Error::InvalidInput("partition needs at least one cell per axis".into()));
    }
    let (a, b) = i.bounds()?;
    let dx1 = (b.x1 - a.x1) / m as f64;
    let dx2 = (b.x2 - a.x2) / n as f64;
    let rows: Vec<f64> = (0..m)
        .into_par_iter()
        .map(|r| {
            let mut rng = match rule {
                SampleRule::Random(seed) => Some(row_rng(seed, level, r)),
                _ => None,
            };
            let mut term = |j: usize| -> Result<f64> {
                let (t1, t2) = match (rule, rng.as_mut()) {
                    (SampleRule::Midpoint, _) => (0.5, 0.5),
                    (SampleRule::Corner, _) => (0.0, 0.0),
                    (SampleRule::Random(_), Some(g)) => (g.random::<f64>(), g.random::<f64>()),
                    (SampleRule::Random(_), None) => unreachable!("rng is set for the random rule"),
                };
                let x = Point2::new(a.x1 + (r as f64 + t1) * dx1, a.x2 + (j as f64 + t2) * dx2);
                f.value(x)
            };
            pairwise(0, n, &mut term)
        })
        .collect::<Result<_>>()?;
    let mut row_term = |r: usize| Ok(rows[r]);
    Ok(pairwise(0, m, &mut row_term)? * dx1 * dx2)
}

/// Riemann integral by dyadic refinement of a uniform partition.
///
/// Level `k` uses `m·2^k × n·2^k` cells; the estimate is converged once two
/// consecutive levels differ by at most `tol`.
pub fn riemann_integral(f: &ScalarField2, i: &Interval2, cfg: &RiemannConfig) -> Result<EstimateReport> {
    if cfg.initial_m == 0 || cfg.initial_n == 0 || !(cfg.tol > 0.0) {
        return Err(Error::InvalidInput("Riemann config needs m, n ≥ 1 and tol > 0".into()));
    }
    let (a, b) = i.bounds()?;
    let mut trace = Vec::with_capacity(cfg.max_refinements + 1);
    let mut evaluations = 0usize;
    let mut prev: Option<f64> = None;
    let mut residual = f64::INFINITY;
    for k in 0..=cfg.max_refinements {
        let m = cfg.initial_m << k;
        let n = cfg.initial_n << k;
        let r = riemann_sum(f, i, m, n, cfg.sample_rule, k)?;
        evaluations += m * n;
        let mesh = ((b.x1 - a.x1) / m as f64).hypot((b.x2 - a.x2) / n as f64);
        trace.push(TraceEntry {
            step: StepParam::Scalar(mesh),
            estimate: r,
        });
        if let Some(p) = prev {
            residual = (r - p).abs();
            if residual <= cfg.tol {
                return Ok(EstimateReport {
                    value: Some(r),
                    verdict: Verdict::Converged,
                    trace,
                    residual,
                    evaluations,
                });
            }
        }
        prev = Some(r);
    }
    Ok(EstimateReport {
        value: None,
        verdict: Verdict::Inconclusive,
        trace,
        residual,
        evaluations,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn field(src: &str) -> ScalarField2 {
        ScalarField2::parse(src).unwrap()
    }

    #[test]
    fn constant_is_exact_at_every_level() {
        let i = Interval2::closed(Point2::new(0.0, 0.0), Point2::new(2.0, 3.0)).unwrap();
        let r = riemann_integral(&field("1"), &i, &RiemannConfig::default()).unwrap();
        assert!(r.trace.iter().all(|t| t.estimate == 6.0));
        assert_eq!(r.value, Some(6.0));
    }

    #[test]
    fn bilinear_midpoint() {
        // The midpoint rule is exact for x1*x2.
        let r = riemann_integral(&field("x1*x2"), &Interval2::square(0.0, 1.0), &RiemannConfig::default()).unwrap();
        assert!((r.value.unwrap() - 0.25).abs() < 1e-15);
    }

    #[test]
    fn random_rule_is_reproducible() {
        let i = Interval2::square(0.0, 1.0);
        let f = field("exp(x1)*x2");
        let a = riemann_sum(&f, &i, 40, 40, SampleRule::Random(9), 3).unwrap();
        let b = riemann_sum(&f, &i, 40, 40, SampleRule::Random(9), 3).unwrap();
        let c = riemann_sum(&f, &i, 40, 40, SampleRule::Random(10), 3).unwrap();
        assert_eq!(a, b);
        assert_ne!(a, c);
    }

    #[test]
    fn rules_agree_in_the_limit() {
        let i = Interval2::square(0.0, 1.0);
        let f = field("sin(x1)*cos(x2)");
        let exact = (1.0 - 1f64.cos()) * 1f64.sin();
        for rule in [SampleRule::Midpoint, SampleRule::Corner, SampleRule::Random(3)] {
            let cfg = RiemannConfig {
                tol: 1e-3,
                max_refinements: 12,
                sample_rule: rule,
                ..Default::default()
            };
            let r = riemann_integral(&f, &i, &cfg).unwrap();
            assert!((r.value.unwrap() - exact).abs() < 1e-2, "{rule:?}");
        }
    }

    #[test]
    fn domain_error_surfaces() {
        assert!(riemann_integral(&field("ln(x1 - 0.5)"), &Interval2::square(0.0, 1.0), &RiemannConfig::default()).is_err());
    }
}
