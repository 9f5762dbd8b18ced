//! Double monotonicity, critical points and the first derivative test.

use bicalc::derivative::{classify_stationary, critical_points, monotonicity_classify};
use bicalc::{Interval2, Point2, ScalarField2};

fn main() -> bicalc::Result<()> {
    let i = Interval2::closed(Point2::new(0.0, 0.0), Point2::new(2.0, 4.0))?;
    let f = ScalarField2::parse("-(x1-1)^2*(x2-2)^2")?;
    for p in critical_points(&f, &i, 8, 1e-6)? {
        println!("{:?} point at {} classified {:?}", p.kind, p.location, p.classification);
    }
    println!("at (1,2): {:?}", classify_stationary(&f, Point2::new(1.0, 2.0), &i, 16, 1e-6)?);

    let g = ScalarField2::parse("exp(x1*x2)")?;
    let m = monotonicity_classify(&g, &Interval2::square(0.0, 1.0), 6, 1e-6)?;
    println!("exp(x1x2) on [0,1]²: {:?}, f′ in [{:.3}, {:.3}]", m.class, m.min_derivative, m.max_derivative);
    Ok(())
}
