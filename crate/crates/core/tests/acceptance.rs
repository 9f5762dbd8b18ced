//! Acceptance gate: one PASS/FAIL line per criterion, non-zero exit if any
//! criterion fails.

use std::f64::consts::{LN_2, PI};
use std::time::{Duration, Instant};

use bicalc::derivative::{critical_points, mixed_partials_check, mvt_solve, rolle_solve, Classification, CriticalKind, SolverConfig};
use bicalc::integral::{
    change_of_variables_integral, improper_newton_integral, newton_integral, riemann_integral, CovSpec, ImproperConfig,
    ImproperVerdict, Jacobian, RiemannConfig,
};
use bicalc::verify::{families, subdivision_checks};
use bicalc::{
    continuity_probe, delta2, split_double_constant, Interval2, Point2, ProbeConfig, ProbeVerdict, QuadrantSign,
    ScalarField2,
};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

type Check = Result<String, String>;
type Criterion = (&'static str, fn() -> Check);

fn field(src: &str) -> ScalarField2 {
    ScalarField2::parse(src).unwrap()
}

fn open(s: &str) -> Interval2 {
    bicalc::cli::parse::parse_interval(s).unwrap()
}

fn timed<T>(f: impl FnOnce() -> T) -> (T, Duration) {
    let t = Instant::now();
    let v = f();
    (v, t.elapsed())
}

fn ensure(ok: bool, msg: String) -> Check {
    if ok {
        Ok(msg)
    } else {
        Err(msg)
    }
}

fn newton_golden() -> Check {
    let big_f = field("x1^2*x2^3/2");
    let (a, b) = (Point2::new(0.0, 1.0), Point2::new(2.0, 3.0));
    newton_integral(&big_f, a, b).map_err(|e| e.to_string())?;
    let (v, dt) = timed(|| newton_integral(&big_f, a, b));
    let v = v.map_err(|e| e.to_string())?;
    ensure(v == 52.0 && dt < Duration::from_millis(1), format!("value {v}, {dt:?}"))
}

fn ftc2_desk() -> Check {
    let f = field("3*x1*x2^2");
    let i = Interval2::closed(Point2::new(0.0, 1.0), Point2::new(2.0, 3.0)).unwrap();
    let cfg = RiemannConfig {
        max_refinements: 12,
        ..Default::default()
    };
    let (r, dt) = timed(|| riemann_integral(&f, &i, &cfg));
    let r = r.map_err(|e| e.to_string())?;
    let v = r.converged_value().ok_or_else(|| format!("not converged: {:?}", r.last_estimate()))?;
    let refinements = r.trace.len() - 1;
    ensure(
        (v - 52.0).abs() <= 1e-6 && refinements <= 12 && dt < Duration::from_secs(5),
        format!("value {v}, {refinements} refinements, {dt:?}"),
    )
}

fn improper_convergent() -> Check {
    let big_f = field("(x1+x2)*ln(x1+x2)");
    let v = improper_newton_integral(&big_f, &open("(0,1)x(0,1)"), &ImproperConfig::default()).map_err(|e| e.to_string())?;
    let value = v.value().ok_or_else(|| format!("verdict {}", v.label()))?;
    ensure((value - 2.0 * LN_2).abs() <= 1e-6, format!("value {value}, error {:.1e}", (value - 2.0 * LN_2).abs()))
}

fn divergence_witness() -> Check {
    let big_f = field("x1/(x1+x2)");
    let v = improper_newton_integral(&big_f, &open("(0,1]x(0,1]"), &ImproperConfig::default()).map_err(|e| e.to_string())?;
    let (p, q) = v.witness_limits().ok_or_else(|| format!("verdict {}", v.label()))?;
    let (lo, hi) = if p < q { (p, q) } else { (q, p) };
    ensure(
        (hi - 0.0).abs() <= 1e-6 && (lo + 1.0 / 6.0).abs() <= 1e-6,
        format!("witness limits {p} and {q}"),
    )
}

fn change_of_variables() -> Check {
    let cases = [
        ("x1*x2", "u", "u*v", "u^4*v^2/8", "(0,1)x(0,1)", 0.125, 1e-6),
        ("1/(x1+x2)^2", "u", "u^2*v", "ln(1+u*v)", "(0,1)x(0,1)", LN_2, 1e-6),
        ("exp(-x1^2)", "u", "u*v", "-exp(-u^2)*v/2", "(0,inf)x(-1,1)", 1.0, 1e-4),
        (
            "1/(x1+x2)",
            "u",
            "v/u",
            "u*ln(u^2+v)+2*sqrt(v)*atan(u/sqrt(v))",
            "(1,inf)x(0,1)",
            PI / 2.0 - LN_2,
            1e-4,
        ),
    ];
    let mut parts = Vec::new();
    let mut ok = true;
    for (f, h1, h2, g, i, want, tol) in cases {
        let spec = CovSpec {
            map: (field(h1), field(h2)),
            jacobian: Jacobian::default(),
            param_interval: open(i),
        };
        let r = change_of_variables_integral(&field(f), &spec, Some(&field(g)), &ImproperConfig::default())
            .map_err(|e| e.to_string())?;
        match r.verdict {
            ImproperVerdict::Convergent { value, .. } => {
                let err = (value - want).abs();
                ok &= err <= tol;
                parts.push(format!("{err:.1e}"));
            }
            other => {
                ok = false;
                parts.push(other.label().to_string());
            }
        }
    }
    ensure(ok, format!("errors {}", parts.join(", ")))
}

/// `∂²/∂x1∂x2` by nested central differences with a fixed step.
fn nested_fd(f: impl Fn(f64, f64) -> f64, c: Point2, h: f64) -> f64 {
    (f(c.x1 + h, c.x2 + h) - f(c.x1 + h, c.x2 - h) - f(c.x1 - h, c.x2 + h) + f(c.x1 - h, c.x2 - h)) / (4.0 * h * h)
}

fn rolle() -> Check {
    let f = field("sin(x1)*sin(x2)");
    let i = Interval2::square(0.0, PI);
    let r = rolle_solve(&f, &i, &SolverConfig::default()).map_err(|e| e.to_string())?;
    let fd = nested_fd(|a, b| a.sin() * b.sin(), r.c, 1e-4);
    let exact = r.c.x1.cos() * r.c.x2.cos();
    ensure(
        r.achieved.abs() <= 1e-6 && i.contains_interior(r.c) && fd.abs() <= 1e-6 && exact.abs() <= 1e-6,
        format!("c = {}, f′(c) = {:.1e}, nested FD {:.1e}", r.c, r.achieved, fd),
    )
}

fn mvt() -> Check {
    let f = field("x1^2*x2^2");
    let r = mvt_solve(&f, &Interval2::square(0.0, 1.0), &SolverConfig::default()).map_err(|e| e.to_string())?;
    let err = (4.0 * r.c.x1 * r.c.x2 - 1.0).abs();
    ensure(err <= 1e-5, format!("c = {}, |4c1c2 − 1| = {err:.1e}", r.c))
}

fn schwarz() -> Check {
    let mut rng = ChaCha8Rng::seed_from_u64(8);
    let mut worst_sym: f64 = 0.0;
    let mut worst_dd: f64 = 0.0;
    for _ in 0..10 {
        let s = families::smooth(&mut rng);
        for _ in 0..20 {
            let a = Point2::new(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0));
            let m = mixed_partials_check(&s.field, a, 0.125, 16, 1e-6).map_err(|e| e.to_string())?;
            worst_sym = worst_sym.max((m.f12 - m.f21).abs());
            worst_dd = worst_dd.max((m.dd - m.f12).abs());
            if m.dd.is_nan() {
                return Err(format!("no double derivative for {} at {a}", s.source));
            }
        }
    }
    ensure(
        worst_sym <= 1e-4 && worst_dd <= 1e-4,
        format!("max |f12 − f21| = {worst_sym:.1e}, max |f′ − f12| = {worst_dd:.1e}"),
    )
}

fn subdivision() -> Check {
    let mut rng = ChaCha8Rng::seed_from_u64(9);
    let checks = subdivision_checks(&mut rng, 1000).map_err(|e| e.to_string())?;
    let failures: usize = checks.iter().map(|c| c.failures).sum();
    let trials: usize = checks.iter().map(|c| c.trials).sum();
    ensure(failures == 0, format!("{failures} failures in {trials} checks"))
}

fn separable() -> Check {
    let mut rng = ChaCha8Rng::seed_from_u64(10);
    let cfg = ProbeConfig::default();
    let (mut worst_delta, mut worst_split, mut probe_fail, mut jumps) = (0.0f64, 0.0f64, 0, 0);
    for k in 0..100 {
        let jump = k % 2 == 0;
        jumps += jump as usize;
        let s = families::separable(&mut rng, jump);
        let f = &s.field;
        let a = Point2::new(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0));
        let b = Point2::new(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0));
        worst_delta = worst_delta.max(delta2(f, a, b).map_err(|e| e.to_string())?.abs());
        if continuity_probe(f, a, None, &cfg).verdict != ProbeVerdict::Pass {
            probe_fail += 1;
        }
        let i = Interval2::square(-1.0, 1.0);
        let split = split_double_constant(f, &i, a).map_err(|e| e.to_string())?;
        worst_split = worst_split.max(split.max_reconstruction_error(f, &i, 9).map_err(|e| e.to_string())?);
    }
    ensure(
        worst_delta <= 1e-12 && worst_split <= 1e-10 && probe_fail == 0,
        format!("{jumps} with jumps; max |Δ| = {worst_delta:.1e}, split error {worst_split:.1e}, {probe_fail} probe failures"),
    )
}

fn extrema() -> Check {
    let mut parts = Vec::new();
    let mut ok = true;
    for (d, c) in [(-1.0, (1.0, 2.0)), (1.0, (1.0, 2.0)), (-1.0, (0.3, 0.7)), (1.0, (0.3, 0.7))] {
        let src = format!("{d}*(x1-{})^2*(x2-{})^2", c.0, c.1);
        let i = Interval2::closed(Point2::new(c.0 - 1.0, c.1 - 2.0), Point2::new(c.0 + 1.0, c.1 + 2.0)).unwrap();
        let cps = critical_points(&field(&src), &i, 8, 1e-6).map_err(|e| e.to_string())?;
        let stationary: Vec<_> = cps.iter().filter(|p| p.kind == CriticalKind::Stationary).collect();
        let want = if d < 0.0 { Classification::DoubleMax } else { Classification::DoubleMin };
        let good = stationary.len() == 1
            && stationary[0].location.distance(Point2::new(c.0, c.1)) <= 1e-4
            && stationary[0].classification == want;
        ok &= good;
        parts.push(format!("D={d}: {} point(s)", stationary.len()));
    }
    ensure(ok, parts.join(", "))
}

fn piecewise_continuity() -> Check {
    let f = field("if(x1>0, if(x2>0, x1^x2*x2^x1, 0), 0)");
    let cfg = ProbeConfig {
        sweep: 8,
        shrink_steps: 200,
        tol: 1e-6,
    };
    let r = continuity_probe(&f, Point2::ORIGIN, Some(QuadrantSign::PP), &cfg);
    let diag = f.at(1e-4, 1e-4).map_err(|e| e.to_string())?;
    ensure(
        r.verdict == ProbeVerdict::Pass && diag > 0.99,
        format!("probe {:?} (worst {:.1e}), f(t,t) = {diag:.6}", r.verdict, r.worst_deviation),
    )
}

fn main() {
    let criteria: [Criterion; 12] = [
        ("Newton integral of x1²x2³/2 is exactly 52", newton_golden),
        ("Riemann integral of 3x1x2² agrees with 52", ftc2_desk),
        ("improper integral of (x1+x2)ln(x1+x2) is 2 ln 2", improper_convergent),
        ("improper integral of x1/(x1+x2) diverges with limits 0 and −1/6", divergence_witness),
        ("change of variables gives 1/8, ln 2, 1 and π/2 − ln 2", change_of_variables),
        ("Rolle point of sin(x1)sin(x2) on [0,π]²", rolle),
        ("mean value point of x1²x2² on [0,1]²", mvt),
        ("Schwarz agreement on 10 smooth functions × 20 points", schwarz),
        ("subdivision identities over 1000 trials", subdivision),
        ("separable functions are double constant and double continuous", separable),
        ("critical point and class of D(x1−c1)²(x2−c2)²", extrema),
        ("x1^x2·x2^x1 is double continuous at 0 but not continuous", piecewise_continuity),
    ];
    let mut failed = 0;
    for (k, (name, check)) in criteria.iter().enumerate() {
        let (outcome, dt) = timed(check);
        let (tag, detail) = match outcome {
            Ok(d) => ("PASS", d),
            Err(d) => {
                failed += 1;
                ("FAIL", d)
            }
        };
        println!("{tag} [{:>2}] {name}: {detail} ({:.0} ms)", k + 1, dt.as_secs_f64() * 1e3);
    }
    println!("{} of {} criteria passed", criteria.len() - failed, criteria.len());
    if failed > 0 {
        std::process::exit(1);
    }
}
