//! Integrals over non-rectangular regions, pulled back to a double interval.

use bicalc::cli::parse::parse_interval;
use bicalc::integral::{change_of_variables_integral, CovSpec, ImproperConfig, Jacobian};
use bicalc::ScalarField2;

fn main() -> bicalc::Result<()> {
    let cfg = ImproperConfig::default();
    let p = |s: &str| ScalarField2::parse(s);

    // x1·x2 over the triangle (0,0), (1,0), (1,1) via h(u,v) = (u, uv).
    let triangle = CovSpec {
        map: (p("u")?, p("u*v")?),
        jacobian: Jacobian::Analytic(p("u")?),
        param_interval: parse_interval("(0,1)x(0,1)")?,
    };
    let with_primitive = change_of_variables_integral(&p("x1*x2")?, &triangle, Some(&p("u^4*v^2/8")?), &cfg)?;
    println!("triangle, with primitive: {:?}", with_primitive.verdict.value());

    // exp(−x1²) over the wedge |x2| < x1, no primitive supplied.
    let wedge = CovSpec {
        map: (p("u")?, p("u*v")?),
        jacobian: Jacobian::default(),
        param_interval: parse_interval("(0,inf)x(-1,1)")?,
    };
    let exhausted = change_of_variables_integral(&p("exp(-x1^2)")?, &wedge, None, &cfg)?;
    println!("wedge, by exhaustion: {:?}", exhausted.verdict.value());
    Ok(())
}
