//! Numerical double calculus in two variables.
//!
//! The central object is the double difference
//!
//! ```text
//! Δ_a^b(f) = f(b1, b2) − f(b1, a2) − f(a1, b2) + f(a1, a2)
//! ```
//!
//! which plays the role of `f(b) − f(a)` for functions of two variables.
//! Built on it are double continuity probes, the double derivative
//! `f′(a) = lim m_a^x(f)`, constructive Rolle and mean value solvers, and
//! double Newton, Riemann and improper integrals.
//!
//! ```
//! use bicalc::{delta2, Point2, ScalarField2};
//!
//! let f = ScalarField2::parse("x1^2*x2^3/2").unwrap();
//! let v = delta2(&f, Point2::new(0.0, 1.0), Point2::new(2.0, 3.0)).unwrap();
//! assert_eq!(v, 52.0);
//! ```

// `!(x <= tol)` is used on purpose so that NaN lands on the failing side.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod accel;
pub mod cli;
pub mod derivative;
pub mod difference;
pub mod domain;
pub mod error;
pub mod expr;
pub mod integral;
pub mod net;
pub mod verify;

pub use difference::{
    continuity_probe, delta2, delta_map_field, delta_n, global_continuity_probe, is_double_constant, mean_slope,
    split_double_constant, ContinuityReport, ProbeConfig, ProbeVerdict, SplitDecomposition, SweepAxis,
};
pub use domain::{
    contains, nsim, EdgeClosure, EstimateReport, EvalOutcome, ExtendedPoint2, Interval2, Point2, QuadrantSign,
    ScalarField2, ScalarFieldN, Sign, StepParam, TraceEntry, Verdict,
};
pub use error::{DomainError, Error, ParseError, Result};
pub use expr::{evaluate, parse, Expr};
