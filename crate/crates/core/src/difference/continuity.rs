//! Sampling probes for double continuity.
//!
//! `f` is double continuous at `a` when, for every fixed `x1` near `a1`,
//! `Δ_a^x(f) → 0` as `x2 → a2`, and symmetrically with the roles swapped.
//! Sampling can falsify this but never certify it, so a probe returns
//! pass, fail, or inconclusive.

use serde::{Deserialize, Serialize};

use super::delta2;
use crate::domain::{Interval2, Point2, QuadrantSign, ScalarField2, Sign};
use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ProbeConfig {
    /// Fixed coordinate values per side.
    pub sweep: usize,
    pub shrink_steps: usize,
    pub tol: f64,
}

impl Default for ProbeConfig {
    fn default() -> Self {
        ProbeConfig {
            sweep: 8,
            shrink_steps: 20,
            tol: 1e-6,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ProbeVerdict {
    Pass,
    Fail,
    Inconclusive,
}

/// Which coordinate is held fixed while the other one is driven.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum SweepAxis {
    /// `x1` fixed, `x2` driven to its target.
    #[serde(rename = "x1-sweep")]
    X1Sweep,
    /// `x2` fixed, `x1` driven to its target.
    #[serde(rename = "x2-sweep")]
    X2Sweep,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ContinuityReport {
    pub point: Point2,
    pub sign: Option<QuadrantSign>,
    pub verdict: ProbeVerdict,
    pub worst_axis: SweepAxis,
    pub worst_deviation: f64,
    pub samples: usize,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub message: Option<String>,
}

const INITIAL_FRACTION: f64 = 0.125;
const SHRINK: f64 = 0.5;
const INCONCLUSIVE_BAND: f64 = 10.0;
const MONOTONE_WINDOW: usize = 3;

/// Accumulates per-sequence results into a verdict.
struct Tally {
    tol: f64,
    worst: f64,
    worst_axis: SweepAxis,
    monotone: bool,
    samples: usize,
}

impl Tally {
    fn new(tol: f64) -> Self {
        Tally {
            tol,
            worst: 0.0,
            worst_axis: SweepAxis::X1Sweep,
            monotone: true,
            samples: 0,
        }
    }

    /// Record the magnitudes `|Δ|` of one driven sequence.
    fn record(&mut self, axis: SweepAxis, seq: &[f64], scale: f64) {
        self.samples += seq.len();
        let last = *seq.last().unwrap_or(&0.0);
        if last > self.worst {
            self.worst = last;
            self.worst_axis = axis;
        }
        // Values at the rounding floor count as settled, not as increases.
        let floor = (1e-3 * self.tol).max(64.0 * f64::EPSILON * scale);
        let start = seq.len().saturating_sub(MONOTONE_WINDOW + 1);
        let decreasing = seq[start..].windows(2).all(|w| w[1] <= w[0] + floor || w[1] <= floor);
        self.monotone &= decreasing;
    }

    fn verdict(&self) -> ProbeVerdict {
        if self.worst <= self.tol && self.monotone {
            ProbeVerdict::Pass
        } else if self.worst <= INCONCLUSIVE_BAND * self.tol {
            ProbeVerdict::Inconclusive
        } else {
            ProbeVerdict::Fail
        }
    }
}

fn failed(point: Point2, sign: Option<QuadrantSign>, tally: &Tally, err: Error) -> ContinuityReport {
    ContinuityReport {
        point,
        sign,
        verdict: ProbeVerdict::Fail,
        worst_axis: tally.worst_axis,
        worst_deviation: f64::INFINITY,
        samples: tally.samples,
        message: Some(err.to_string()),
    }
}

/// Room from `x` to the edge of `hint` on side `s` (1.0 without a hint).
fn reach(hint: Option<&Interval2>, axis: usize, x: f64, s: Sign) -> f64 {
    let Some(i) = hint else { return 1.0 };
    let (lo, hi) = if axis == 0 {
        (i.lower.x1, i.upper.x1)
    } else {
        (i.lower.x2, i.upper.x2)
    };
    let room = match s {
        Sign::Plus => hi - x,
        Sign::Minus => x - lo,
    };
    if room.is_finite() {
        room.max(0.0)
    } else {
        1.0
    }
}

fn sides(hint: Option<&Interval2>, axis: usize, x: f64, only: Option<Sign>) -> Vec<(Sign, f64)> {
    [Sign::Plus, Sign::Minus]
        .into_iter()
        .filter(|s| only.is_none_or(|o| o == *s))
        .map(|s| (s, reach(hint, axis, x, s)))
        .filter(|(_, r)| *r > 0.0)
        .collect()
}

/// Probe double continuity of `f` at `a`, optionally restricted to one
/// quadrant. A domain error ends the probe with a failing report.
pub fn continuity_probe(
    f: &ScalarField2,
    a: Point2,
    sign: Option<QuadrantSign>,
    cfg: &ProbeConfig,
) -> ContinuityReport {
    let mut tally = Tally::new(cfg.tol);
    match probe_point(f, a, sign, cfg, &mut tally) {
        Ok(()) => ContinuityReport {
            point: a,
            sign,
            verdict: tally.verdict(),
            worst_axis: tally.worst_axis,
            worst_deviation: tally.worst,
            samples: tally.samples,
            message: None,
        },
        Err(e) => failed(a, sign, &tally, e),
    }
}

fn probe_point(
    f: &ScalarField2,
    a: Point2,
    sign: Option<QuadrantSign>,
    cfg: &ProbeConfig,
    tally: &mut Tally,
) -> Result<()> {
    let hint = f.domain_hint();
    let f_a = f.value(a)?;
    for (axis, fixed_axis) in [(SweepAxis::X1Sweep, 0usize), (SweepAxis::X2Sweep, 1usize)] {
        let driven_axis = 1 - fixed_axis;
        let coord = |p: Point2, k: usize| if k == 0 { p.x1 } else { p.x2 };
        let fixed_sign = sign.map(|q| if fixed_axis == 0 { q.s1() } else { q.s2() });
        let driven_sign = sign.map(|q| if driven_axis == 0 { q.s1() } else { q.s2() });
        let fixed_sides = sides(hint, fixed_axis, coord(a, fixed_axis), fixed_sign);
        let driven_sides = sides(hint, driven_axis, coord(a, driven_axis), driven_sign);
        if fixed_sides.is_empty() || driven_sides.is_empty() {
            return Err(Error::InvalidInput(format!(
                "no room around {a} for the requested approach"
            )));
        }
        for &(fs, f_reach) in &fixed_sides {
            for j in 1..=cfg.sweep.max(1) {
                let fixed = coord(a, fixed_axis) + fs.factor() * f_reach * j as f64 / cfg.sweep.max(1) as f64;
                for &(ds, d_reach) in &driven_sides {
                    let mut seq = Vec::with_capacity(cfg.shrink_steps);
                    let mut scale = f_a.abs();
                    let mut offset = INITIAL_FRACTION * d_reach;
                    for _ in 0..cfg.shrink_steps.max(1) {
                        let driven = coord(a, driven_axis) + ds.factor() * offset;
                        let x = if fixed_axis == 0 {
                            Point2::new(fixed, driven)
                        } else {
                            Point2::new(driven, fixed)
                        };
                        scale = scale.max(f.value(x)?.abs());
                        seq.push(delta2(f, a, x)?.abs());
                        offset *= SHRINK;
                    }
                    tally.record(axis, &seq, scale);
                }
            }
        }
    }
    Ok(())
}

/// Axis sample values: interior cell centres plus closed endpoints.
fn axis_samples(lo: f64, hi: f64, lo_closed: bool, hi_closed: bool, grid: usize) -> Vec<f64> {
    let n = grid.max(1);
    let mut out = Vec::with_capacity(n + 2);
    if lo_closed {
        out.push(lo);
    }
    out.extend((0..n).map(|j| lo + (hi - lo) * (j as f64 + 0.5) / n as f64));
    if hi_closed {
        out.push(hi);
    }
    out
}

/// Probe global double continuity on a bounded interval: for sampled
/// `c, d ∈ I1` and `e ∈ I2`, `Δ_{(d,e)}^{(c,x2)}(f) → 0` as `x2 → e` inside
/// `I2`, and the same with the axes exchanged.
pub fn global_continuity_probe(f: &ScalarField2, i: &Interval2, grid: usize, cfg: &ProbeConfig) -> ContinuityReport {
    let mut tally = Tally::new(cfg.tol);
    let anchor = i.center().unwrap_or(Point2::ORIGIN);
    match probe_global(f, i, grid, cfg, &mut tally) {
        Ok(()) => ContinuityReport {
            point: anchor,
            sign: None,
            verdict: tally.verdict(),
            worst_axis: tally.worst_axis,
            worst_deviation: tally.worst,
            samples: tally.samples,
            message: None,
        },
        Err(e) => failed(anchor, None, &tally, e),
    }
}

fn probe_global(f: &ScalarField2, i: &Interval2, grid: usize, cfg: &ProbeConfig, tally: &mut Tally) -> Result<()> {
    let (lo, hi) = i.bounds()?;
    let s1 = axis_samples(lo.x1, hi.x1, i.closed.left, i.closed.right, grid);
    let s2 = axis_samples(lo.x2, hi.x2, i.closed.bottom, i.closed.top, grid);
    // (sweep axis, samples for c and d, samples for e, driven span, driven bounds)
    let plans = [
        (SweepAxis::X1Sweep, &s1, &s2, (lo.x2, hi.x2)),
        (SweepAxis::X2Sweep, &s2, &s1, (lo.x1, hi.x1)),
    ];
    for (axis, cd, es, (dlo, dhi)) in plans {
        let point = |fixed: f64, driven: f64| match axis {
            SweepAxis::X1Sweep => Point2::new(fixed, driven),
            SweepAxis::X2Sweep => Point2::new(driven, fixed),
        };
        for &c in cd.iter() {
            for &d in cd.iter() {
                for &e in es.iter() {
                    for side in [1.0, -1.0] {
                        let room = if side > 0.0 { dhi - e } else { e - dlo };
                        if room <= 0.0 {
                            continue;
                        }
                        let anchor = point(d, e);
                        let mut seq = Vec::with_capacity(cfg.shrink_steps);
                        let mut scale = f.value(anchor)?.abs();
                        let mut offset = INITIAL_FRACTION * room;
                        for _ in 0..cfg.shrink_steps.max(1) {
                            let x = point(c, e + side * offset);
                            scale = scale.max(f.value(x)?.abs());
                            seq.push(delta2(f, anchor, x)?.abs());
                            offset *= SHRINK;
                        }
                        tally.record(axis, &seq, scale);
                    }
                }
            }
        }
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn field(src: &str) -> ScalarField2 {
        ScalarField2::parse(src).unwrap()
    }

    #[test]
    fn smooth_field_passes() {
        let r = continuity_probe(&field("sin(x1*x2)"), Point2::new(0.3, -0.2), None, &ProbeConfig::default());
        assert_eq!(r.verdict, ProbeVerdict::Pass, "{r:?}");
    }

    #[test]
    fn jump_in_one_variable_passes() {
        let f = field("x1^3 + if(x2 > 0, 1, -1)");
        let r = continuity_probe(&f, Point2::new(0.5, 0.0), None, &ProbeConfig::default());
        assert_eq!(r.verdict, ProbeVerdict::Pass, "{r:?}");
    }

    #[test]
    fn axis_jump_fails() {
        // x1^2 + x2^2 off the axes and 0 on them: Δ_0^x → x1^2 along fixed x1.
        let f = field("if(x1 == 0, 0, if(x2 == 0, 0, x1^2 + x2^2))");
        let r = continuity_probe(&f, Point2::ORIGIN, None, &ProbeConfig::default());
        assert_eq!(r.verdict, ProbeVerdict::Fail, "{r:?}");
    }

    #[test]
    fn domain_error_is_a_failing_report() {
        let r = continuity_probe(&field("ln(x1)"), Point2::new(0.1, 0.0), None, &ProbeConfig::default());
        assert_eq!(r.verdict, ProbeVerdict::Fail);
        assert!(r.message.is_some());
    }

    #[test]
    fn global_probe_smooth() {
        let r = global_continuity_probe(&field("x1^2*x2"), &Interval2::square(0.0, 1.0), 5, &ProbeConfig::default());
        assert_eq!(r.verdict, ProbeVerdict::Pass, "{r:?}");
    }

    #[test]
    fn global_probe_separable_jump() {
        let f = field("cos(x1) + if(x2 < 0.4, 0, 3)");
        let r = global_continuity_probe(&f, &Interval2::square(0.0, 1.0), 5, &ProbeConfig::default());
        assert_eq!(r.verdict, ProbeVerdict::Pass, "{r:?}");
    }

    #[test]
    fn global_probe_detects_non_separable_jump() {
        let f = field("if(x2 < 0.5, 0, x1)");
        let r = global_continuity_probe(&f, &Interval2::square(0.0, 1.0), 5, &ProbeConfig::default());
        assert_eq!(r.verdict, ProbeVerdict::Fail, "{r:?}");
    }
}
