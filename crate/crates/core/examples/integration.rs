//! Newton and Riemann double integrals and both fundamental theorems.

use bicalc::integral::{ftc1_check, ftc2_check, integral_mean_point, newton_integral, riemann_integral, RiemannConfig, SampleRule};
use bicalc::derivative::SolverConfig;
use bicalc::{Interval2, Point2, ScalarField2};

fn main() -> bicalc::Result<()> {
    let big_f = ScalarField2::parse("x1^2*x2^3/2")?;
    let f = ScalarField2::parse("3*x1*x2^2")?;
    let (a, b) = (Point2::new(0.0, 1.0), Point2::new(2.0, 3.0));
    let i = Interval2::closed(a, b)?;
    println!("Newton: {}", newton_integral(&big_f, a, b)?);

    let r = riemann_integral(&f, &i, &RiemannConfig::default())?;
    println!("Riemann (midpoint): {:?} after {} levels", r.value, r.trace.len());
    let cfg = RiemannConfig {
        sample_rule: SampleRule::Random(7),
        tol: 1e-3,
        ..Default::default()
    };
    println!("Riemann (random tags): {:?}", riemann_integral(&f, &i, &cfg)?.value);

    let t2 = ftc2_check(&f, &big_f, &i, &RiemannConfig::default())?;
    println!("second theorem: Riemann {} vs Newton {} agree: {}", t2.riemann, t2.newton, t2.agree);
    let t1 = ftc1_check(&f, &i, 3, 1e-6)?;
    println!("first theorem at {} points: {}", t1.points.len(), t1.passed);

    let c = integral_mean_point(&f, &big_f, &i, &SolverConfig::default())?;
    println!("mean value point of the integral: {} with f(c) = {}", c.c, c.achieved);
    Ok(())
}
