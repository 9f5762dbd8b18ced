//! Executable property suites over seeded random functions.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use super::families::{self, Sample};
use crate::derivative::{
    cauchy_mvt_solve, classify_stationary, critical_points, double_derivative, mixed_partials_check, mvt_solve,
    rolle_solve, Classification, CriticalKind, DerivConfig, SolverConfig,
};
use crate::difference::{
    continuity_probe, delta2, delta_n, split_double_constant, ProbeConfig, ProbeVerdict,
};
use crate::domain::{Interval2, Point2, ScalarField2};
use crate::error::{Error, Result};
use crate::integral::{accumulate_field, ftc2_check, newton_integral, riemann_integral, riemann_sum, RiemannConfig, SampleRule};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Suite {
    All,
    Difference,
    Derivative,
    Integral,
}

impl std::str::FromStr for Suite {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "all" => Ok(Suite::All),
            "difference" => Ok(Suite::Difference),
            "derivative" => Ok(Suite::Derivative),
            "integral" => Ok(Suite::Integral),
            other => Err(Error::InvalidInput(format!("unknown suite {other:?}"))),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CheckResult {
    pub name: String,
    pub trials: usize,
    pub failures: usize,
    pub max_error: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub first_failure: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct VerifySummary {
    pub suite: Suite,
    pub seed: u64,
    pub tol: f64,
    pub checks: Vec<CheckResult>,
    pub trials: usize,
    pub failures: usize,
}

impl VerifySummary {
    pub fn passed(&self) -> bool {
        self.failures == 0
    }
}

/// Collects trial outcomes for one named property.
struct Check {
    result: CheckResult,
}

impl Check {
    fn new(name: &str) -> Self {
        Check {
            result: CheckResult {
                name: name.to_string(),
                trials: 0,
                failures: 0,
                max_error: 0.0,
                first_failure: None,
            },
        }
    }

    /// Record a trial with error `err` against bound `bound`.
    fn error(&mut self, err: f64, bound: f64, what: impl FnOnce() -> String) {
        self.result.trials += 1;
        if err.is_nan() || err > self.result.max_error {
            self.result.max_error = err;
        }
        if !(err <= bound) {
            self.fail(what);
        }
    }

    fn pass_if(&mut self, ok: bool, what: impl FnOnce() -> String) {
        self.result.trials += 1;
        if !ok {
            self.fail(what);
        }
    }

    /// A trial that raised an error.
    fn outcome<T>(&mut self, r: Result<T>, what: impl FnOnce() -> String) -> Option<T> {
        match r {
            Ok(v) => Some(v),
            Err(e) => {
                self.result.trials += 1;
                let ctx = what();
                self.fail(|| format!("{ctx}: {e}"));
                None
            }
        }
    }

    fn fail(&mut self, what: impl FnOnce() -> String) {
        self.result.failures += 1;
        if self.result.first_failure.is_none() {
            self.result.first_failure = Some(what());
        }
    }

    fn done(self) -> CheckResult {
        self.result
    }
}

fn point<R: Rng>(rng: &mut R, lo: f64, hi: f64) -> Point2 {
    Point2::new(rng.random_range(lo..hi), rng.random_range(lo..hi))
}

fn corner_scale(f: &ScalarField2, pts: &[Point2]) -> Result<f64> {
    let mut m: f64 = 1.0;
    for p in pts {
        m = m.max(f.value(*p)?.abs());
    }
    Ok(m)
}

/// Random box with sides in `[0.5, 1.5]` inside `[-1, 2]²`.
fn random_box<R: Rng>(rng: &mut R) -> Interval2 {
    let a = point(rng, -1.0, 0.5);
    let b = Point2::new(a.x1 + rng.random_range(0.5..1.5), a.x2 + rng.random_range(0.5..1.5));
    Interval2::closed(a, b).expect("ordered box")
}

/// Twenty halvings leave offsets near `2^-23`, too coarse for `tol` when the
/// mixed partial is of order ten; thirty keep smooth samples well inside it.
fn long_probe(tol: f64) -> ProbeConfig {
    ProbeConfig {
        shrink_steps: 30,
        tol,
        ..ProbeConfig::default()
    }
}

/// Subdivision identities of the double difference, `n` random trials.
pub fn subdivision_checks(rng: &mut ChaCha8Rng, n: usize) -> Result<Vec<CheckResult>> {
    const REL: f64 = 1e-10;
    let mut checks = [
        Check::new("difference: Δ_a^a = 0, Δ_a^b = Δ_b^a = −Δ_(a1,b2)^(b1,a2)"),
        Check::new("difference: split along x1"),
        Check::new("difference: split along x2"),
        Check::new("difference: four-tile identity"),
    ];
    for _ in 0..n {
        let s = families::any(rng);
        let f = &s.field;
        let a = point(rng, -1.0, 1.0);
        let b = point(rng, -1.0, 1.0);
        let x = point(rng, -1.0, 1.0);
        let d = |p: Point2, q: Point2| delta2(f, p, q);
        let pts = [a, b, x, Point2::new(a.x1, b.x2), Point2::new(b.x1, a.x2), Point2::new(x.x1, a.x2), Point2::new(a.x1, x.x2), Point2::new(x.x1, b.x2), Point2::new(b.x1, x.x2)];
        let bound = REL * corner_scale(f, &pts)?;
        let ab = d(a, b)?;
        let e0 = d(a, a)?.abs().max((ab - d(b, a)?).abs()).max((ab + d(Point2::new(a.x1, b.x2), Point2::new(b.x1, a.x2))?).abs());
        checks[0].error(e0, bound, || s.source.clone());
        let e1 = (ab - d(a, Point2::new(x.x1, b.x2))? - d(Point2::new(x.x1, a.x2), b)?).abs();
        checks[1].error(e1, bound, || s.source.clone());
        let e2 = (ab - d(a, Point2::new(b.x1, x.x2))? - d(Point2::new(a.x1, x.x2), b)?).abs();
        checks[2].error(e2, bound, || s.source.clone());
        let tiles = d(a, x)? + d(x, b)? + d(Point2::new(a.x1, x.x2), Point2::new(x.x1, b.x2))? + d(Point2::new(x.x1, a.x2), Point2::new(b.x1, x.x2))?;
        checks[3].error((ab - tiles).abs(), bound, || s.source.clone());
    }
    Ok(checks.into_iter().map(Check::done).collect())
}

fn difference_suite(rng: &mut ChaCha8Rng, tol: f64) -> Result<Vec<CheckResult>> {
    let mut out = subdivision_checks(rng, 200)?;

    let mut dn = Check::new("difference: delta_n with n = 2 equals delta2 bit for bit");
    for _ in 0..100 {
        let s = families::any(rng);
        let (a, b) = (point(rng, -1.0, 1.0), point(rng, -1.0, 1.0));
        let v2 = delta2(&s.field, a, b)?;
        let vn = delta_n(&s.field.to_field_n(), &a.to_array(), &b.to_array())?;
        dn.pass_if(v2.to_bits() == vn.to_bits(), || s.source.clone());
    }
    out.push(dn.done());

    let mut split = Check::new("difference: separable functions split and re-sum");
    let mut zero = Check::new("difference: separable functions have Δ ≡ 0");
    let unit = Interval2::square(-1.0, 1.0);
    for _ in 0..50 {
        let jump = rng.random_bool(0.5);
        let s = families::separable(rng, jump);
        let (a, b) = (point(rng, -1.0, 1.0), point(rng, -1.0, 1.0));
        let scale = corner_scale(&s.field, &[a, b, Point2::new(a.x1, b.x2), Point2::new(b.x1, a.x2)])?;
        zero.error(delta2(&s.field, a, b)?.abs(), 1e-12 * scale, || s.source.clone());
        let anchor = point(rng, -1.0, 1.0);
        if let Some(dec) = split.outcome(split_double_constant(&s.field, &unit, anchor), || s.source.clone()) {
            let err = dec.max_reconstruction_error(&s.field, &unit, 9)?;
            split.error(err, 1e-10 * scale.max(4.0), || s.source.clone());
        }
    }
    out.push(zero.done());
    out.push(split.done());

    let mut cont = Check::new("difference: continuous functions pass the continuity probe");
    let cfg = long_probe(tol);
    for _ in 0..20 {
        let s = families::smooth(rng);
        let a = point(rng, -1.0, 1.0);
        let r = continuity_probe(&s.field, a, None, &cfg);
        cont.pass_if(r.verdict == ProbeVerdict::Pass, || format!("{} at {a}: {:?}", s.source, r.verdict));
    }
    out.push(cont.done());
    Ok(out)
}

fn derivative_suite(rng: &mut ChaCha8Rng, tol: f64) -> Result<Vec<CheckResult>> {
    let dcfg = DerivConfig::with_tol(tol);
    let scfg = SolverConfig::with_tol(tol);
    let mut out = Vec::new();

    let mut schwarz = Check::new("derivative: f12 = f21 = f′ on smooth functions");
    let mut oracle = Check::new("derivative: f′ matches the closed-form mixed partial");
    for _ in 0..20 {
        let s = families::smooth(rng);
        let a = point(rng, -1.0, 1.0);
        if let Some(m) = schwarz.outcome(mixed_partials_check(&s.field, a, 0.125, 20, tol.max(1e-4)), || s.source.clone()) {
            let err = (m.f12 - m.f21).abs().max((m.dd - m.f12).abs());
            schwarz.error(err, tol.max(1e-4), || format!("{} at {a}", s.source));
            let want = s.mixed().expect("smooth families know f12").value(a)?;
            oracle.error((m.dd - want).abs(), tol.max(1e-4), || format!("{} at {a}", s.source));
        }
    }
    out.push(schwarz.done());
    out.push(oracle.done());

    let mut cont = Check::new("derivative: differentiable implies double continuous");
    let mut rho = Check::new("derivative: first-order residual within bound");
    for _ in 0..10 {
        let s = families::smooth(rng);
        let a = point(rng, -1.0, 1.0);
        let d = double_derivative(&s.field, a, None, &dcfg)?;
        if d.value().is_some() {
            let r = continuity_probe(&s.field, a, None, &long_probe(tol));
            cont.pass_if(r.verdict == ProbeVerdict::Pass, || format!("{} at {a}", s.source));
            rho.error(d.first_order_residual, dcfg.residual_tol, || format!("{} at {a}", s.source));
        }
    }
    out.push(cont.done());
    out.push(rho.done());

    let mut rolle = Check::new("derivative: Rolle point is interior with |f′(c)| ≤ tol");
    let mut mvt = Check::new("derivative: MVT point has f′(c) = mean slope");
    let mut cauchy = Check::new("derivative: Cauchy identity holds both ways round");
    for _ in 0..5 {
        let s = families::polynomial(rng);
        let i = random_box(rng);
        let (a, b) = i.bounds()?;
        let m = crate::difference::mean_slope(&s.field, a, b)?;
        let g = s.field.sub_scaled(m, &ScalarField2::from_fn(move |x| (x.x1 - a.x1) * (x.x2 - a.x2)));
        if let Some(r) = rolle.outcome(rolle_solve(&g, &i, &scfg), || s.source.clone()) {
            rolle.pass_if(r.residual <= tol && i.contains_interior(r.c), || format!("{} on {i}", s.source));
        }
        if let Some(r) = mvt.outcome(mvt_solve(&s.field, &i, &scfg), || s.source.clone()) {
            mvt.error(r.residual, tol, || format!("{} on {i}", s.source));
        }
        let t = families::polynomial(rng);
        let fwd = cauchy_mvt_solve(&s.field, &t.field, &i, &scfg);
        let back = cauchy_mvt_solve(&t.field, &s.field, &i, &scfg);
        let ctx = || format!("{} / {} on {i}", s.source, t.source);
        if let (Some(p), Some(q)) = (cauchy.outcome(fwd, ctx), cauchy.outcome(back, ctx)) {
            let rp = (p.lhs - p.rhs).abs() / 1f64.max(p.lhs.abs()).max(p.rhs.abs());
            let rq = (q.lhs - q.rhs).abs() / 1f64.max(q.lhs.abs()).max(q.rhs.abs());
            cauchy.error(rp.max(rq), tol, ctx);
        }
    }
    out.push(rolle.done());
    out.push(mvt.done());
    out.push(cauchy.done());

    let mut sectors = Check::new("derivative: first derivative test on D(x1−c1)²(x2−c2)²");
    let mut fermat = Check::new("derivative: interior brute-force double extrema are reported critical points");
    for _ in 0..4 {
        let d = if rng.random_bool(0.5) { -1.0 } else { 1.0 } * rng.random_range(1..=3) as f64;
        // Centre on a lattice node so the brute-force scan can hit it.
        let c = Point2::new(rng.random_range(1..=3) as f64 / 2.0, rng.random_range(1..=3) as f64 / 2.0);
        let src = format!("{d}*(x1-{})^2*(x2-{})^2", c.x1, c.x2);
        let f = ScalarField2::parse(&src)?;
        let i = Interval2::square(0.0, 2.0);
        let class = classify_stationary(&f, c, &i, 16, tol)?;
        let want = if d < 0.0 { Classification::DoubleMax } else { Classification::DoubleMin };
        sectors.pass_if(class == want, || format!("{src}: {class:?}"));

        let cps = critical_points(&f, &i, 8, tol)?;
        let lattice = i.lattice(5)?;
        let cell = 0.5;
        for &p in lattice.iter().filter(|p| i.contains_interior(**p)) {
            let signs: Vec<f64> = lattice
                .iter()
                .filter(|q| q.nsim(p))
                .map(|&q| delta2(&f, p, q).map(|d| if d == 0.0 { 0.0 } else { d.signum() }))
                .collect::<Result<_>>()?;
            let extreme = !signs.is_empty() && signs.iter().all(|s| *s == signs[0] && *s != 0.0);
            if extreme {
                let near = cps
                    .iter()
                    .any(|cp| cp.kind == CriticalKind::Stationary && cp.location.distance(p) <= cell);
                fermat.pass_if(near, || format!("{src}: extreme lattice point {p} not reported"));
            }
        }
    }
    out.push(sectors.done());
    out.push(fermat.done());
    Ok(out)
}

fn integral_suite(rng: &mut ChaCha8Rng, tol: f64) -> Result<Vec<CheckResult>> {
    let mut out = Vec::new();
    let mut props = [
        Check::new("integral: ∫_a^a = 0, ∫_a^b = ∫_b^a = −∫ over the swapped diagonal"),
        Check::new("integral: split identities"),
        Check::new("integral: four-tile identity"),
        Check::new("integral: primitive independence under separable shifts"),
        Check::new("integral: accumulated field has the primitive's differences"),
    ];
    for _ in 0..100 {
        let s = families::smooth(rng);
        let f = &s.field;
        let (a, b, c, x) = (point(rng, -1.0, 1.0), point(rng, -1.0, 1.0), point(rng, -1.0, 1.0), point(rng, -1.0, 1.0));
        let n = |p: Point2, q: Point2| newton_integral(f, p, q);
        let pts = [a, b, c, Point2::new(a.x1, b.x2), Point2::new(b.x1, a.x2), Point2::new(c.x1, a.x2), Point2::new(a.x1, c.x2), Point2::new(c.x1, b.x2), Point2::new(b.x1, c.x2)];
        let bound = 1e-10 * corner_scale(f, &pts)?;
        let ab = n(a, b)?;
        props[0].error(
            n(a, a)?.abs().max((ab - n(b, a)?).abs()).max((ab + n(Point2::new(a.x1, b.x2), Point2::new(b.x1, a.x2))?).abs()),
            bound,
            || s.source.clone(),
        );
        let split1 = (ab - n(a, Point2::new(c.x1, b.x2))? - n(Point2::new(c.x1, a.x2), b)?).abs();
        let split2 = (ab - n(a, Point2::new(b.x1, c.x2))? - n(Point2::new(a.x1, c.x2), b)?).abs();
        props[1].error(split1.max(split2), bound, || s.source.clone());
        let tiles = n(a, c)? + n(c, b)? + n(Point2::new(a.x1, c.x2), Point2::new(c.x1, b.x2))? + n(Point2::new(c.x1, a.x2), Point2::new(b.x1, c.x2))?;
        props[2].error((ab - tiles).abs(), bound, || s.source.clone());

        let shift = families::separable(rng, false);
        let shifted = f.add(&shift.field);
        let sb = 1e-10 * corner_scale(&shifted, &pts)?.max(bound / 1e-10);
        props[3].error((newton_integral(&shifted, a, b)? - ab).abs(), sb, || format!("{} + {}", s.source, shift.source));

        let g = accumulate_field(f, a);
        let gx = delta2(&g, b, x)?;
        let gb = 1e-10 * corner_scale(&g, &[b, x, Point2::new(b.x1, x.x2), Point2::new(x.x1, b.x2)])?.max(bound / 1e-10);
        props[4].error((gx - delta2(f, b, x)?).abs(), gb, || s.source.clone());
    }
    out.extend(props.into_iter().map(Check::done));

    let mut ftc2 = Check::new("integral: Riemann integral of F12 equals the Newton integral of F");
    let rcfg = RiemannConfig { tol, ..RiemannConfig::default() };
    for _ in 0..3 {
        let s = families::smooth(rng);
        let f = s.mixed().expect("smooth families know f12");
        let i = Interval2::square(0.0, 1.0);
        if let Some(r) = ftc2.outcome(ftc2_check(&f, &s.field, &i, &rcfg), || s.source.clone()) {
            let err = (r.riemann - r.newton).abs() / r.newton.abs().max(1.0);
            ftc2.error(err, tol, || format!("{}: {r:?}", s.source));
        }
    }
    out.push(ftc2.done());

    let mut rules = Check::new("integral: midpoint, corner and random sums share the limit");
    for _ in 0..2 {
        let s = families::smooth(rng);
        let f = s.mixed().expect("smooth families know f12");
        let i = Interval2::square(0.0, 1.0);
        let loose = RiemannConfig { tol: 1e-3, ..RiemannConfig::default() };
        let mut vals = Vec::new();
        for rule in [SampleRule::Midpoint, SampleRule::Corner, SampleRule::Random(rng.random())] {
            let r = riemann_integral(&f, &i, &RiemannConfig { sample_rule: rule, ..loose })?;
            vals.push(r.value.unwrap_or(f64::NAN));
        }
        let spread = vals.iter().fold(f64::NEG_INFINITY, |m, v| m.max(*v)) - vals.iter().fold(f64::INFINITY, |m, v| m.min(*v));
        let scale = newton_integral(&s.field, Point2::new(0.0, 0.0), Point2::new(1.0, 1.0))?.abs().max(1.0);
        rules.error(spread / scale, 10.0 * loose.tol, || format!("{}: {vals:?}", s.source));
    }
    out.push(rules.done());

    let mut linear = Check::new("integral: Riemann sums are linear at a fixed partition");
    for _ in 0..20 {
        let (p, q) = (families::smooth(rng), families::smooth(rng));
        let (al, be) = (rng.random_range(-2.0..2.0), rng.random_range(-2.0..2.0));
        let comb = p.field.scale(al).add(&q.field.scale(be));
        let i = Interval2::square(-1.0, 1.0);
        let lhs = riemann_sum(&comb, &i, 32, 32, SampleRule::Midpoint, 0)?;
        let rp = riemann_sum(&p.field, &i, 32, 32, SampleRule::Midpoint, 0)?;
        let rq = riemann_sum(&q.field, &i, 32, 32, SampleRule::Midpoint, 0)?;
        let scale = (al * rp).abs() + (be * rq).abs() + 1.0;
        linear.error((lhs - (al * rp + be * rq)).abs() / scale, 1e-12, || format!("{} / {}", p.source, q.source));
    }
    out.push(linear.done());
    Ok(out)
}

/// Run a property suite with a fixed seed.
pub fn verify(suite: Suite, seed: u64, tol: f64) -> Result<VerifySummary> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut checks = Vec::new();
    if matches!(suite, Suite::All | Suite::Difference) {
        checks.extend(difference_suite(&mut rng, tol)?);
    }
    if matches!(suite, Suite::All | Suite::Derivative) {
        checks.extend(derivative_suite(&mut rng, tol)?);
    }
    if matches!(suite, Suite::All | Suite::Integral) {
        checks.extend(integral_suite(&mut rng, tol)?);
    }
    Ok(VerifySummary {
        suite,
        seed,
        tol,
        trials: checks.iter().map(|c| c.trials).sum(),
        failures: checks.iter().map(|c| c.failures).sum(),
        checks,
    })
}

/// Sample helper re-exported for tests and examples.
pub fn smooth_sample(seed: u64) -> Sample {
    families::smooth(&mut ChaCha8Rng::seed_from_u64(seed))
}
