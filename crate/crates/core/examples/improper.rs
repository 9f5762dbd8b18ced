//! Improper double Newton integrals: a convergent one and a divergent one
//! with its two witness paths.

use bicalc::integral::{improper_newton_integral, open_interval, ImproperConfig, ImproperVerdict};
use bicalc::ScalarField2;

fn main() -> bicalc::Result<()> {
    let cfg = ImproperConfig::default();
    let unit = open_interval((0.0, 0.0), (1.0, 1.0))?;

    let f = ScalarField2::parse("(x1+x2)*ln(x1+x2)")?;
    let v = improper_newton_integral(&f, &unit, &cfg)?;
    println!("(x1+x2)ln(x1+x2): {} {:?} (2 ln 2 = {})", v.label(), v.value(), 2.0 * 2f64.ln());

    let g = ScalarField2::parse("x1/(x1+x2)")?;
    if let ImproperVerdict::Divergent { witnesses } = improper_newton_integral(&g, &unit, &cfg)? {
        println!("x1/(x1+x2): divergent");
        for w in [&witnesses.first, &witnesses.second] {
            println!("  along {} the limit is {:+.9}", w.path, w.estimate);
        }
    }

    let quadrant = open_interval((0.0, 0.0), (f64::INFINITY, f64::INFINITY))?;
    let h = ScalarField2::parse("atan(x1)*atan(x2)")?;
    let v = improper_newton_integral(&h, &quadrant, &cfg)?;
    println!("atan(x1)atan(x2) on (0,∞)²: {:?} (π²/4 = {})", v.value(), std::f64::consts::PI.powi(2) / 4.0);
    Ok(())
}
