//! Double derivatives: the full limit, one-sided limits and a comparison
//! with the classical mixed partials.

use bicalc::derivative::{double_derivative, mixed_partials_check, DerivConfig};
use bicalc::{Interval2, Point2, QuadrantSign, ScalarField2};

fn main() -> bicalc::Result<()> {
    let cfg = DerivConfig::default();
    let f = ScalarField2::parse("x1^2*x2^3/2")?;
    let a = Point2::new(1.0, 1.0);
    let d = double_derivative(&f, a, None, &cfg)?;
    println!("f′(1,1) = {:?} ({:?}, ρ = {:.1e})", d.value(), d.report.verdict, d.first_order_residual);

    let m = mixed_partials_check(&f, a, 0.125, 16, 1e-6)?;
    println!("f12 = {:.9}, f21 = {:.9}, agree: {}", m.f12, m.f21, m.agree);

    // At a corner of the domain only the inward quadrant is available.
    let g = ScalarField2::parse("sqrt(x1*x2)")?.with_domain_hint(Interval2::square(0.0, 1.0));
    let corner = double_derivative(&g, Point2::new(1.0, 1.0), Some(QuadrantSign::MM), &cfg)?;
    println!("√(x1x2) at (1,1) from below: {:?}", corner.value());

    // Disagreeing quadrants: no double derivative at the origin.
    let h = ScalarField2::parse("abs(x1*x2)")?;
    let o = double_derivative(&h, Point2::ORIGIN, None, &cfg)?;
    for s in &o.signed {
        println!("  |x1x2| sign {}: {:+.6}", s.sign, s.value);
    }
    println!("|x1x2| at 0: {:?}", o.report.verdict);
    Ok(())
}
