//! Shared domain types: points, double intervals, quadrant signs, fields
//! and estimate reports.

mod field;
mod interval;
mod point;
mod report;

pub use field::{EvalOutcome, ScalarField2, ScalarFieldN};
pub use interval::{EdgeClosure, Interval2};
pub use point::{ExtendedPoint2, Point2, QuadrantSign, Sign};
pub use report::{EstimateReport, StepParam, TraceEntry, Verdict};

/// `a ≁ b`: true iff `a1 ≠ b1` and `a2 ≠ b2`.
pub fn nsim(a: Point2, b: Point2) -> bool {
    a.nsim(b)
}

/// Membership respecting the interval's per-edge closure.
pub fn contains(i: &Interval2, p: Point2) -> bool {
    i.contains(p)
}
