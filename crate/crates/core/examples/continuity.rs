//! Double continuity probes. Separable functions with jumps are double
//! continuous; so is x1^x2·x2^x1 at the origin, which is not continuous.

use bicalc::{continuity_probe, global_continuity_probe, Interval2, Point2, ProbeConfig, QuadrantSign, ScalarField2};

fn main() -> bicalc::Result<()> {
    let cfg = ProbeConfig::default();
    let jump = ScalarField2::parse("x1 + if(x2 < 0, -1, 1)")?;
    let r = continuity_probe(&jump, Point2::ORIGIN, None, &cfg);
    println!("x1 + sign(x2) at 0: {:?}, worst {:e}", r.verdict, r.worst_deviation);

    let f = ScalarField2::parse("if(x1>0, if(x2>0, x1^x2*x2^x1, 0), 0)")?;
    let long = ProbeConfig {
        shrink_steps: 200,
        ..cfg
    };
    let r = continuity_probe(&f, Point2::ORIGIN, Some(QuadrantSign::PP), &long);
    println!("x1^x2·x2^x1 at 0 (++): {:?}, worst {:e}", r.verdict, r.worst_deviation);
    println!("but f(1e-4, 1e-4) = {}", f.at(1e-4, 1e-4)?);

    let bad = ScalarField2::parse("if(x2 < 0.5, 0, x1)")?;
    let g = global_continuity_probe(&bad, &Interval2::square(0.0, 1.0), 5, &cfg);
    println!("global probe of a non-separable jump: {:?}", g.verdict);
    Ok(())
}
