//! Seeded random test functions with known mixed partials.

use rand::Rng;

use crate::domain::ScalarField2;

/// A generated function `F` together with its mixed partial `f = F12`.
#[derive(Debug, Clone)]
pub struct Sample {
    pub family: &'static str,
    pub source: String,
    pub field: ScalarField2,
    /// Source of `∂²F/∂x1∂x2`, when the family knows it in closed form.
    pub mixed_source: Option<String>,
}

impl Sample {
    fn new(family: &'static str, source: String, mixed_source: Option<String>) -> Self {
        let field = ScalarField2::parse(&source).expect("generated expression parses");
        Sample {
            family,
            source,
            field,
            mixed_source,
        }
    }

    pub fn mixed(&self) -> Option<ScalarField2> {
        self.mixed_source
            .as_deref()
            .map(|s| ScalarField2::parse(s).expect("generated expression parses"))
    }
}

/// A coefficient on a quarter-integer grid, so sources print exactly.
fn coef<R: Rng>(rng: &mut R, max: i32) -> f64 {
    rng.random_range(-4 * max..=4 * max) as f64 / 4.0
}

fn nonzero<R: Rng>(rng: &mut R, max: i32) -> f64 {
    loop {
        let c = coef(rng, max);
        if c != 0.0 {
            return c;
        }
    }
}

fn lit(c: f64) -> String {
    if c < 0.0 {
        format!("({c})")
    } else {
        format!("{c}")
    }
}

fn monomial(i: u32, j: u32) -> String {
    let mut parts = Vec::new();
    match i {
        0 => {}
        1 => parts.push("x1".to_string()),
        _ => parts.push(format!("x1^{i}")),
    }
    match j {
        0 => {}
        1 => parts.push("x2".to_string()),
        _ => parts.push(format!("x2^{j}")),
    }
    parts.join("*")
}

fn term(c: f64, i: u32, j: u32) -> String {
    let m = monomial(i, j);
    if m.is_empty() {
        lit(c)
    } else {
        format!("{}*{m}", lit(c))
    }
}

/// Polynomial of degree ≤ 3 in each variable.
pub fn polynomial<R: Rng>(rng: &mut R) -> Sample {
    let mut terms = Vec::new();
    let mut mixed = Vec::new();
    for i in 0..=3u32 {
        for j in 0..=3u32 {
            if rng.random_bool(0.4) || (i == 1 && j == 1) {
                let c = nonzero(rng, 2);
                terms.push(term(c, i, j));
                if i > 0 && j > 0 {
                    mixed.push(term(c * (i * j) as f64, i - 1, j - 1));
                }
            }
        }
    }
    if mixed.is_empty() {
        mixed.push("0".into());
    }
    Sample::new("polynomial", terms.join(" + "), Some(mixed.join(" + ")))
}

/// Trigonometric products, including the non-separable `sin(p·x1·x2)`.
pub fn trigonometric<R: Rng>(rng: &mut R) -> Sample {
    let a = nonzero(rng, 2);
    let p = nonzero(rng, 2);
    let q = nonzero(rng, 2);
    if rng.random_bool(0.5) {
        let (s, t) = (coef(rng, 1), coef(rng, 1));
        let src = format!("{}*sin({}*x1 + {})*cos({}*x2 + {})", lit(a), lit(p), lit(s), lit(q), lit(t));
        let mixed = format!(
            "{}*cos({}*x1 + {})*sin({}*x2 + {})",
            lit(-a * p * q),
            lit(p),
            lit(s),
            lit(q),
            lit(t)
        );
        Sample::new("trigonometric", src, Some(mixed))
    } else {
        let src = format!("{}*sin({}*x1*x2)", lit(a), lit(p));
        let mixed = format!(
            "{}*cos({}*x1*x2) - {}*x1*x2*sin({}*x1*x2)",
            lit(a * p),
            lit(p),
            lit(a * p * p),
            lit(p)
        );
        Sample::new("trigonometric", src, Some(mixed))
    }
}

pub fn exponential<R: Rng>(rng: &mut R) -> Sample {
    let a = nonzero(rng, 2);
    let p = nonzero(rng, 1);
    let q = nonzero(rng, 1);
    let src = format!("{}*exp({}*x1 + {}*x2)", lit(a), lit(p), lit(q));
    let mixed = format!("{}*exp({}*x1 + {}*x2)", lit(a * p * q), lit(p), lit(q));
    Sample::new("exponential", src, Some(mixed))
}

/// Any of the smooth families.
pub fn smooth<R: Rng>(rng: &mut R) -> Sample {
    match rng.random_range(0..3) {
        0 => polynomial(rng),
        1 => trigonometric(rng),
        _ => exponential(rng),
    }
}

/// `g(x1) + h(x2)`; with `jump` the part in `x2` has a step at a random
/// level.
pub fn separable<R: Rng>(rng: &mut R, jump: bool) -> Sample {
    let g = match rng.random_range(0..3) {
        0 => format!("{}*x1^2 + {}*x1", lit(coef(rng, 2)), lit(coef(rng, 2))),
        1 => format!("{}*sin({}*x1)", lit(coef(rng, 2)), lit(nonzero(rng, 2))),
        _ => format!("{}*exp({}*x1)", lit(coef(rng, 2)), lit(nonzero(rng, 1))),
    };
    let h = if jump {
        format!(
            "if(x2 > {}, {}, {})",
            lit(coef(rng, 1) / 2.0),
            lit(nonzero(rng, 2)),
            lit(coef(rng, 2))
        )
    } else {
        format!("{}*cos({}*x2)", lit(coef(rng, 2)), lit(nonzero(rng, 2)))
    };
    Sample::new("separable", format!("{g} + {h}"), Some("0".into()))
}

/// Different polynomials on the four quadrants around a random centre.
pub fn piecewise_quadrant<R: Rng>(rng: &mut R) -> Sample {
    let c1 = coef(rng, 1) / 2.0;
    let c2 = coef(rng, 1) / 2.0;
    let mut piece = || format!("{} + {}*x1*x2", lit(coef(rng, 2)), lit(coef(rng, 2)));
    let (a, b, c, d) = (piece(), piece(), piece(), piece());
    let src = format!(
        "if(x1 > {}, if(x2 > {}, {a}, {b}), if(x2 > {}, {c}, {d}))",
        lit(c1),
        lit(c2),
        lit(c2)
    );
    Sample::new("piecewise-quadrant", src, None)
}

/// Any family, including discontinuous ones.
pub fn any<R: Rng>(rng: &mut R) -> Sample {
    match rng.random_range(0..5) {
        0 => polynomial(rng),
        1 => trigonometric(rng),
        2 => exponential(rng),
        3 => separable(rng, true),
        _ => piecewise_quadrant(rng),
    }
}
