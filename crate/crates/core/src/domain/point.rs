use std::fmt;
use std::ops::{Add, Mul, Sub};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// A point of the plane. Both components are finite.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Point2 {
    pub x1: f64,
    pub x2: f64,
}

impl Point2 {
    pub const ORIGIN: Point2 = Point2 { x1: 0.0, x2: 0.0 };

    #[inline]
    pub fn new(x1: f64, x2: f64) -> Self {
        debug_assert!(x1.is_finite() && x2.is_finite(), "non-finite point ({x1}, {x2})");
        Point2 { x1, x2 }
    }

    pub fn try_new(x1: f64, x2: f64) -> Result<Self> {
        if x1.is_finite() && x2.is_finite() {
            Ok(Point2 { x1, x2 })
        } else {
            Err(Error::InvalidInput(format!("point ({x1}, {x2}) is not finite")))
        }
    }

    /// `a ≁ b`: the points differ in both coordinates.
    pub fn nsim(self, other: Point2) -> bool {
        self.x1 != other.x1 && self.x2 != other.x2
    }

    /// Componentwise strict order `a < b`.
    pub fn lt(self, other: Point2) -> bool {
        self.x1 < other.x1 && self.x2 < other.x2
    }

    pub fn midpoint(self, other: Point2) -> Point2 {
        Point2::new(0.5 * (self.x1 + other.x1), 0.5 * (self.x2 + other.x2))
    }

    /// Linear interpolation `self + t (other - self)`.
    pub fn lerp(self, other: Point2, t: f64) -> Point2 {
        Point2::new(
            self.x1 + t * (other.x1 - self.x1),
            self.x2 + t * (other.x2 - self.x2),
        )
    }

    pub fn distance(self, other: Point2) -> f64 {
        (self.x1 - other.x1).hypot(self.x2 - other.x2)
    }

    pub fn to_array(self) -> [f64; 2] {
        [self.x1, self.x2]
    }
}

impl From<(f64, f64)> for Point2 {
    fn from((x1, x2): (f64, f64)) -> Self {
        Point2::new(x1, x2)
    }
}

impl Add for Point2 {
    type Output = Point2;
    fn add(self, rhs: Point2) -> Point2 {
        Point2::new(self.x1 + rhs.x1, self.x2 + rhs.x2)
    }
}

impl Sub for Point2 {
    type Output = Point2;
    fn sub(self, rhs: Point2) -> Point2 {
        Point2::new(self.x1 - rhs.x1, self.x2 - rhs.x2)
    }
}

impl Mul<f64> for Point2 {
    type Output = Point2;
    fn mul(self, k: f64) -> Point2 {
        Point2::new(self.x1 * k, self.x2 * k)
    }
}

impl fmt::Display for Point2 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {})", self.x1, self.x2)
    }
}

/// A point of the affinely extended plane: each component may be `±∞`,
/// never NaN. Used for the bounds of improper integrals and limit targets.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ExtendedPoint2 {
    pub x1: f64,
    pub x2: f64,
}

impl ExtendedPoint2 {
    pub fn new(x1: f64, x2: f64) -> Result<Self> {
        if x1.is_nan() || x2.is_nan() {
            return Err(Error::InvalidInput("NaN coordinate in extended point".into()));
        }
        Ok(ExtendedPoint2 { x1, x2 })
    }

    pub fn is_finite(self) -> bool {
        self.x1.is_finite() && self.x2.is_finite()
    }

    pub fn finite(self) -> Option<Point2> {
        self.is_finite().then(|| Point2::new(self.x1, self.x2))
    }

    pub fn component(self, axis: usize) -> f64 {
        match axis {
            0 => self.x1,
            _ => self.x2,
        }
    }
}

impl From<Point2> for ExtendedPoint2 {
    fn from(p: Point2) -> Self {
        ExtendedPoint2 { x1: p.x1, x2: p.x2 }
    }
}

impl fmt::Display for ExtendedPoint2 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {})", self.x1, self.x2)
    }
}

/// Sign of one coordinate of an approach direction.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Sign {
    Plus,
    Minus,
}

impl Sign {
    pub fn factor(self) -> f64 {
        match self {
            Sign::Plus => 1.0,
            Sign::Minus => -1.0,
        }
    }
}

/// One of the four closed quadrants around a point, selecting the direction
/// of a signed limit, derivative or continuity check.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum QuadrantSign {
    #[serde(rename = "++")]
    PP,
    #[serde(rename = "+-")]
    PM,
    #[serde(rename = "-+")]
    MP,
    #[serde(rename = "--")]
    MM,
}

impl QuadrantSign {
    pub const ALL: [QuadrantSign; 4] = [
        QuadrantSign::PP,
        QuadrantSign::PM,
        QuadrantSign::MP,
        QuadrantSign::MM,
    ];

    pub fn from_signs(s1: Sign, s2: Sign) -> Self {
        match (s1, s2) {
            (Sign::Plus, Sign::Plus) => QuadrantSign::PP,
            (Sign::Plus, Sign::Minus) => QuadrantSign::PM,
            (Sign::Minus, Sign::Plus) => QuadrantSign::MP,
            (Sign::Minus, Sign::Minus) => QuadrantSign::MM,
        }
    }

    pub fn s1(self) -> Sign {
        match self {
            QuadrantSign::PP | QuadrantSign::PM => Sign::Plus,
            QuadrantSign::MP | QuadrantSign::MM => Sign::Minus,
        }
    }

    pub fn s2(self) -> Sign {
        match self {
            QuadrantSign::PP | QuadrantSign::MP => Sign::Plus,
            QuadrantSign::PM | QuadrantSign::MM => Sign::Minus,
        }
    }

    /// Unit step into the quadrant.
    pub fn direction(self) -> Point2 {
        Point2::new(self.s1().factor(), self.s2().factor())
    }

    pub fn as_str(self) -> &'static str {
        match self {
            QuadrantSign::PP => "++",
            QuadrantSign::PM => "+-",
            QuadrantSign::MP => "-+",
            QuadrantSign::MM => "--",
        }
    }
}

impl fmt::Display for QuadrantSign {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl std::str::FromStr for QuadrantSign {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_lowercase().as_str() {
            "++" | "pp" => Ok(QuadrantSign::PP),
            "+-" | "pm" => Ok(QuadrantSign::PM),
            "-+" | "mp" => Ok(QuadrantSign::MP),
            "--" | "mm" => Ok(QuadrantSign::MM),
            other => Err(Error::InvalidInput(format!("unknown quadrant sign '{other}'"))),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn nsim_examples() {
        assert!(Point2::new(0.0, 0.0).nsim(Point2::new(1.0, 1.0)));
        assert!(!Point2::new(0.0, 0.0).nsim(Point2::new(0.0, 1.0)));
        assert!(!Point2::new(2.0, 3.0).nsim(Point2::new(5.0, 3.0)));
    }

    #[test]
    fn quadrant_roundtrip() {
        for q in QuadrantSign::ALL {
            assert_eq!(QuadrantSign::from_signs(q.s1(), q.s2()), q);
            assert_eq!(q.as_str().parse::<QuadrantSign>().unwrap(), q);
        }
    }

    #[test]
    fn extended_rejects_nan() {
        assert!(ExtendedPoint2::new(f64::NAN, 0.0).is_err());
        assert!(ExtendedPoint2::new(f64::INFINITY, f64::NEG_INFINITY).is_ok());
    }
}
