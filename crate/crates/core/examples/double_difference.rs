//! The double difference, its mean slope, the n-dimensional version and
//! double constancy of separable functions.

use bicalc::{delta2, delta_n, is_double_constant, mean_slope, split_double_constant, Interval2, Point2, ScalarField2, ScalarFieldN};

fn main() -> bicalc::Result<()> {
    let f = ScalarField2::parse("x1^2*x2^3/2")?;
    let (a, b) = (Point2::new(0.0, 1.0), Point2::new(2.0, 3.0));
    println!("Δ_a^b(f)   = {}", delta2(&f, a, b)?);
    println!("m_a^b(f)   = {}", mean_slope(&f, a, b)?);

    let g = ScalarFieldN::parse("x1*x2*x3", 3)?;
    println!("Δ for x1x2x3 on [0,1]^3 = {}", delta_n(&g, &[0.0; 3], &[1.0; 3])?);

    // A jump in x2 alone does not disturb double constancy.
    let s = ScalarField2::parse("sin(x1) + if(x2 < 0.3, 0, 1)")?;
    let i = Interval2::square(0.0, 1.0);
    println!("separable is double constant: {}", is_double_constant(&s, &i, 9, 1e-12)?);
    let split = split_double_constant(&s, &i, Point2::new(0.5, 0.5))?;
    println!("reconstruction error: {:e}", split.max_reconstruction_error(&s, &i, 9)?);
    Ok(())
}
