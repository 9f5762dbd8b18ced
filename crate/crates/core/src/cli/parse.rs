//! Point and interval syntax for command-line arguments.

use crate::domain::{EdgeClosure, ExtendedPoint2, Interval2, Point2};
use crate::error::{Error, Result};

fn number(s: &str) -> Result<f64> {
    let t = s.trim();
    let v: f64 = t
        .parse()
        .map_err(|_| Error::InvalidInput(format!("not a number: {t:?}")))?;
    if v.is_nan() {
        return Err(Error::InvalidInput("NaN is not a coordinate".into()));
    }
    Ok(v)
}

/// Comma-separated reals; `inf` and `-inf` are accepted.
pub fn parse_list(s: &str) -> Result<Vec<f64>> {
    s.split(',').map(number).collect()
}

pub fn parse_extended_point(s: &str) -> Result<ExtendedPoint2> {
    match parse_list(s)?.as_slice() {
        [x1, x2] => ExtendedPoint2::new(*x1, *x2),
        other => Err(Error::InvalidInput(format!(
            "a point needs two coordinates, got {} in {s:?}",
            other.len()
        ))),
    }
}

/// A finite point `r1,r2`.
pub fn parse_point(s: &str) -> Result<Point2> {
    parse_extended_point(s)?
        .finite()
        .ok_or_else(|| Error::InvalidInput(format!("point {s:?} must be finite")))
}

/// One factor `[a,b]`, `(a,b]`, … Returns bounds and closure of each end.
fn parse_factor(s: &str) -> Result<(f64, f64, bool, bool)> {
    let t = s.trim();
    let bad = || Error::InvalidInput(format!("expected an interval like [a,b] or (a,b], got {t:?}"));
    let mut chars = t.chars();
    let open = chars.next().ok_or_else(bad)?;
    let close = chars.next_back().ok_or_else(bad)?;
    let lo_closed = match open {
        '[' => true,
        '(' => false,
        _ => return Err(bad()),
    };
    let hi_closed = match close {
        ']' => true,
        ')' => false,
        _ => return Err(bad()),
    };
    match parse_list(chars.as_str())?.as_slice() {
        [a, b] => Ok((*a, *b, lo_closed, hi_closed)),
        _ => Err(bad()),
    }
}

/// `[a1,b1]x[a2,b2]` with `(`/`)` marking open edges. `×` also separates
/// the factors.
pub fn parse_interval(s: &str) -> Result<Interval2> {
    let normalized = s.replace('×', "x");
    let split = normalized
        .find([']', ')'])
        .map(|k| k + 1)
        .ok_or_else(|| Error::InvalidInput(format!("expected [a1,b1]x[a2,b2], got {s:?}")))?;
    let (first, rest) = normalized.split_at(split);
    let rest = rest.trim_start();
    let second = rest
        .strip_prefix('x')
        .or_else(|| rest.strip_prefix('X'))
        .or_else(|| rest.strip_prefix('*'))
        .ok_or_else(|| Error::InvalidInput(format!("expected 'x' between the factors of {s:?}")))?;
    let (a1, b1, left, right) = parse_factor(first)?;
    let (a2, b2, bottom, top) = parse_factor(second)?;
    Interval2::new(
        ExtendedPoint2::new(a1, a2)?,
        ExtendedPoint2::new(b1, b2)?,
        EdgeClosure {
            left,
            right,
            bottom,
            top,
        },
    )
}
