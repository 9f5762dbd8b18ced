use std::fmt;

use serde::{Deserialize, Serialize};

use super::point::{ExtendedPoint2, Point2, QuadrantSign, Sign};
use crate::error::{Error, Result};

/// Which of the four edges of a double interval belong to it.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct EdgeClosure {
    pub left: bool,
    pub right: bool,
    pub bottom: bool,
    pub top: bool,
}

impl EdgeClosure {
    pub const CLOSED: EdgeClosure = EdgeClosure {
        left: true,
        right: true,
        bottom: true,
        top: true,
    };
    pub const OPEN: EdgeClosure = EdgeClosure {
        left: false,
        right: false,
        bottom: false,
        top: false,
    };
}

/// A double interval `I1 × I2` with per-edge closure. Bounds may be
/// infinite, in which case the corresponding edge is open.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Interval2 {
    pub lower: ExtendedPoint2,
    pub upper: ExtendedPoint2,
    pub closed: EdgeClosure,
}

impl Interval2 {
    pub fn new(lower: ExtendedPoint2, upper: ExtendedPoint2, closed: EdgeClosure) -> Result<Self> {
        if !(lower.x1 < upper.x1 && lower.x2 < upper.x2) {
            return Err(Error::InvalidInput(format!(
                "interval bounds {lower} and {upper} are not strictly ordered"
            )));
        }
        let edges = [
            (closed.left, lower.x1, "left"),
            (closed.right, upper.x1, "right"),
            (closed.bottom, lower.x2, "bottom"),
            (closed.top, upper.x2, "top"),
        ];
        for (is_closed, bound, name) in edges {
            if is_closed && !bound.is_finite() {
                return Err(Error::InvalidInput(format!("{name} edge at infinity must be open")));
            }
        }
        Ok(Interval2 {
            lower,
            upper,
            closed,
        })
    }

    /// The closed interval `[a, b]`.
    pub fn closed(a: Point2, b: Point2) -> Result<Self> {
        Self::new(a.into(), b.into(), EdgeClosure::CLOSED)
    }

    /// The open interval `(a, b)`; bounds may be infinite.
    pub fn open(a: ExtendedPoint2, b: ExtendedPoint2) -> Result<Self> {
        Self::new(a, b, EdgeClosure::OPEN)
    }

    /// Shorthand for the closed square `[lo, hi]²`.
    pub fn square(lo: f64, hi: f64) -> Self {
        Self::closed(Point2::new(lo, lo), Point2::new(hi, hi)).expect("lo < hi")
    }

    pub fn is_finite(&self) -> bool {
        self.lower.is_finite() && self.upper.is_finite()
    }

    pub fn lower_point(&self) -> Option<Point2> {
        self.lower.finite()
    }

    pub fn upper_point(&self) -> Option<Point2> {
        self.upper.finite()
    }

    fn require_finite(&self) -> Result<(Point2, Point2)> {
        match (self.lower.finite(), self.upper.finite()) {
            (Some(a), Some(b)) => Ok((a, b)),
            _ => Err(Error::InvalidInput(format!("interval {self} is unbounded"))),
        }
    }

    /// Lower and upper corners of a bounded interval.
    pub fn bounds(&self) -> Result<(Point2, Point2)> {
        self.require_finite()
    }

    pub fn span1(&self) -> f64 {
        self.upper.x1 - self.lower.x1
    }

    pub fn span2(&self) -> f64 {
        self.upper.x2 - self.lower.x2
    }

    pub fn area(&self) -> f64 {
        self.span1() * self.span2()
    }

    pub fn center(&self) -> Result<Point2> {
        let (a, b) = self.require_finite()?;
        Ok(a.midpoint(b))
    }

    pub fn contains(&self, p: Point2) -> bool {
        let in_axis = |x: f64, lo: f64, hi: f64, lo_closed: bool, hi_closed: bool| {
            let above = if lo_closed { x >= lo } else { x > lo };
            let below = if hi_closed { x <= hi } else { x < hi };
            above && below
        };
        in_axis(
            p.x1,
            self.lower.x1,
            self.upper.x1,
            self.closed.left,
            self.closed.right,
        ) && in_axis(
            p.x2,
            self.lower.x2,
            self.upper.x2,
            self.closed.bottom,
            self.closed.top,
        )
    }

    /// Strict interior membership, ignoring closure flags.
    pub fn contains_interior(&self, p: Point2) -> bool {
        p.x1 > self.lower.x1 && p.x1 < self.upper.x1 && p.x2 > self.lower.x2 && p.x2 < self.upper.x2
    }

    /// True when every point of `self` lies in `other`.
    pub fn is_subset_of(&self, other: &Interval2) -> bool {
        let axis = |lo: f64, hi: f64, lo_c: bool, hi_c: bool, olo: f64, ohi: f64, olo_c: bool, ohi_c: bool| {
            let lo_ok = lo > olo || (lo == olo && (olo_c || !lo_c));
            let hi_ok = hi < ohi || (hi == ohi && (ohi_c || !hi_c));
            lo_ok && hi_ok
        };
        axis(
            self.lower.x1,
            self.upper.x1,
            self.closed.left,
            self.closed.right,
            other.lower.x1,
            other.upper.x1,
            other.closed.left,
            other.closed.right,
        ) && axis(
            self.lower.x2,
            self.upper.x2,
            self.closed.bottom,
            self.closed.top,
            other.lower.x2,
            other.upper.x2,
            other.closed.bottom,
            other.closed.top,
        )
    }

    /// Quadrant signs that stay inside the interval when approaching `p`.
    /// Interior points admit all four; edge points admit the two pointing
    /// inward; corners admit one.
    pub fn applicable_signs(&self, p: Point2) -> Vec<QuadrantSign> {
        if !self.contains(p) {
            return Vec::new();
        }
        let axis_signs = |x: f64, lo: f64, hi: f64| -> Vec<Sign> {
            let mut out = Vec::with_capacity(2);
            if x < hi {
                out.push(Sign::Plus);
            }
            if x > lo {
                out.push(Sign::Minus);
            }
            out
        };
        let s1 = axis_signs(p.x1, self.lower.x1, self.upper.x1);
        let s2 = axis_signs(p.x2, self.lower.x2, self.upper.x2);
        let mut out = Vec::with_capacity(4);
        for &a in &s1 {
            for &b in &s2 {
                out.push(QuadrantSign::from_signs(a, b));
            }
        }
        out
    }

    /// Distance available from `p` towards the given quadrant, per axis.
    pub fn room(&self, p: Point2, sign: QuadrantSign) -> (f64, f64) {
        let r1 = match sign.s1() {
            Sign::Plus => self.upper.x1 - p.x1,
            Sign::Minus => p.x1 - self.lower.x1,
        };
        let r2 = match sign.s2() {
            Sign::Plus => self.upper.x2 - p.x2,
            Sign::Minus => p.x2 - self.lower.x2,
        };
        (r1, r2)
    }

    /// Centres of an `n1 × n2` uniform cell partition of a bounded interval,
    /// row-major in `x1`. Never touches the boundary.
    pub fn cell_centers(&self, n1: usize, n2: usize) -> Result<Vec<Point2>> {
        let (a, b) = self.require_finite()?;
        let h1 = (b.x1 - a.x1) / n1 as f64;
        let h2 = (b.x2 - a.x2) / n2 as f64;
        let mut out = Vec::with_capacity(n1 * n2);
        for i in 0..n1 {
            for j in 0..n2 {
                out.push(Point2::new(
                    a.x1 + (i as f64 + 0.5) * h1,
                    a.x2 + (j as f64 + 0.5) * h2,
                ));
            }
        }
        Ok(out)
    }

    /// `n × n` lattice including the boundary (`n ≥ 2`).
    pub fn lattice(&self, n: usize) -> Result<Vec<Point2>> {
        let (a, b) = self.require_finite()?;
        let n = n.max(2);
        let step = |lo: f64, hi: f64, k: usize| lo + (hi - lo) * k as f64 / (n - 1) as f64;
        let mut out = Vec::with_capacity(n * n);
        for i in 0..n {
            for j in 0..n {
                out.push(Point2::new(step(a.x1, b.x1, i), step(a.x2, b.x2, j)));
            }
        }
        Ok(out)
    }
}

impl fmt::Display for Interval2 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let open = |c: bool| if c { '[' } else { '(' };
        let close = |c: bool| if c { ']' } else { ')' };
        write!(
            f,
            "{}{},{}{}x{}{},{}{}",
            open(self.closed.left),
            fmt_bound(self.lower.x1),
            fmt_bound(self.upper.x1),
            close(self.closed.right),
            open(self.closed.bottom),
            fmt_bound(self.lower.x2),
            fmt_bound(self.upper.x2),
            close(self.closed.top),
        )
    }
}

fn fmt_bound(x: f64) -> String {
    if x == f64::INFINITY {
        "inf".into()
    } else if x == f64::NEG_INFINITY {
        "-inf".into()
    } else {
        x.to_string()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn unit(closed: EdgeClosure) -> Interval2 {
        Interval2::new(
            Point2::new(0.0, 0.0).into(),
            Point2::new(1.0, 1.0).into(),
            closed,
        )
        .unwrap()
    }

    #[test]
    fn contains_examples() {
        assert!(unit(EdgeClosure::CLOSED).contains(Point2::new(1.0, 1.0)));
        assert!(!unit(EdgeClosure::OPEN).contains(Point2::new(1.0, 0.5)));
        let unbounded = Interval2::open(
            ExtendedPoint2::new(0.0, 0.0).unwrap(),
            ExtendedPoint2::new(f64::INFINITY, 1.0).unwrap(),
        )
        .unwrap();
        assert!(unbounded.contains(Point2::new(10.0, 0.5)));
    }

    #[test]
    fn rejects_bad_bounds() {
        assert!(Interval2::closed(Point2::new(1.0, 0.0), Point2::new(0.0, 1.0)).is_err());
        let inf = ExtendedPoint2::new(f64::INFINITY, 1.0).unwrap();
        assert!(Interval2::new(Point2::ORIGIN.into(), inf, EdgeClosure::CLOSED).is_err());
    }

    #[test]
    fn applicable_signs_at_boundary() {
        let i = unit(EdgeClosure::CLOSED);
        assert_eq!(i.applicable_signs(Point2::new(0.5, 0.5)).len(), 4);
        assert_eq!(
            i.applicable_signs(Point2::new(0.0, 0.5)),
            vec![QuadrantSign::PP, QuadrantSign::PM]
        );
        assert_eq!(i.applicable_signs(Point2::new(1.0, 1.0)), vec![QuadrantSign::MM]);
    }

    #[test]
    fn display_marks_open_edges() {
        let i = Interval2::new(
            Point2::new(0.0, 0.0).into(),
            Point2::new(1.0, 1.0).into(),
            EdgeClosure {
                left: false,
                right: true,
                bottom: false,
                top: true,
            },
        )
        .unwrap();
        assert_eq!(i.to_string(), "(0,1]x(0,1]");
    }
}
