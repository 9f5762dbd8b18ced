//! Constructive double Rolle, mean value and Cauchy mean value points.

use std::f64::consts::PI;

use bicalc::derivative::{cauchy_mvt_solve, mvt_solve, rolle_solve, SolverConfig};
use bicalc::{Interval2, ScalarField2};

fn main() -> bicalc::Result<()> {
    let cfg = SolverConfig::default();
    let f = ScalarField2::parse("sin(x1)*sin(x2)")?;
    let r = rolle_solve(&f, &Interval2::square(0.0, PI), &cfg)?;
    println!("Rolle: c = {}, f′(c) = {:.1e}", r.c, r.achieved);

    let unit = Interval2::square(0.0, 1.0);
    let g = ScalarField2::parse("x1^2*x2^2")?;
    let m = mvt_solve(&g, &unit, &cfg)?;
    println!("MVT: c = {}, f′(c) = {:.9}, mean slope {}", m.c, m.achieved, m.target);

    let h = ScalarField2::parse("exp(x1*x2)")?;
    let c = cauchy_mvt_solve(&h, &g, &Interval2::square(0.5, 1.5), &cfg)?;
    println!("Cauchy: c = {}, f′Δg = {:.9}, g′Δf = {:.9}", c.c, c.lhs, c.rhs);
    Ok(())
}
