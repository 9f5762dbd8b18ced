use std::fmt;
use std::sync::Arc;

use super::interval::Interval2;
use super::point::Point2;
use crate::error::{DomainError, Error, ParseError, Result};
use crate::expr::Expr;

/// Result of evaluating a field at one point: a finite value or a domain
/// error. NaN and infinities never escape as values.
pub type EvalOutcome = std::result::Result<f64, DomainError>;

type Eval2 = dyn Fn(Point2) -> EvalOutcome + Send + Sync;
type EvalN = dyn Fn(&[f64]) -> EvalOutcome + Send + Sync;

#[inline]
fn finite(v: EvalOutcome) -> EvalOutcome {
    match v {
        Ok(x) if x.is_finite() => Ok(x),
        Ok(x) => Err(DomainError::new(format!("non-finite value {x}"))),
        Err(e) => Err(e),
    }
}

/// A real function of two real variables.
///
/// Cheap to clone; the evaluator is shared. Evaluation is deterministic and
/// may be called from several threads at once.
#[derive(Clone)]
pub struct ScalarField2 {
    eval: Arc<Eval2>,
    domain_hint: Option<Interval2>,
    label: Option<Arc<str>>,
}

impl ScalarField2 {
    pub fn from_fn<F>(f: F) -> Self
    where
        F: Fn(Point2) -> f64 + Send + Sync + 'static,
    {
        Self::from_outcome_fn(move |p| Ok(f(p)))
    }

    /// Wrap a fallible evaluator. Non-finite values become domain errors.
    pub fn from_outcome_fn<F>(f: F) -> Self
    where
        F: Fn(Point2) -> EvalOutcome + Send + Sync + 'static,
    {
        ScalarField2 {
            eval: Arc::new(move |p| finite(f(p))),
            domain_hint: None,
            label: None,
        }
    }

    /// Parse an expression in `x1, x2` (aliases `x, y` and `u, v`).
    pub fn parse(src: &str) -> std::result::Result<Self, ParseError> {
        let expr = Arc::new(Expr::parse(src, 2)?);
        let label: Arc<str> = Arc::from(src.trim());
        let field = Self::from_outcome_fn(move |p| expr.eval(&[p.x1, p.x2]));
        Ok(field.with_label(label))
    }

    pub fn with_domain_hint(mut self, hint: Interval2) -> Self {
        self.domain_hint = Some(hint);
        self
    }

    pub fn with_label(mut self, label: impl Into<Arc<str>>) -> Self {
        self.label = Some(label.into());
        self
    }

    pub fn domain_hint(&self) -> Option<&Interval2> {
        self.domain_hint.as_ref()
    }

    pub fn label(&self) -> Option<&str> {
        self.label.as_deref()
    }

    #[inline]
    pub fn eval(&self, p: Point2) -> EvalOutcome {
        (self.eval)(p)
    }

    /// Evaluate, lifting a domain error into the crate error.
    #[inline]
    pub fn value(&self, p: Point2) -> Result<f64> {
        self.eval(p).map_err(Error::from)
    }

    pub fn at(&self, x1: f64, x2: f64) -> Result<f64> {
        self.value(Point2::new(x1, x2))
    }

    /// `self + other`.
    pub fn add(&self, other: &ScalarField2) -> ScalarField2 {
        let (f, g) = (self.clone(), other.clone());
        ScalarField2::from_outcome_fn(move |p| Ok(f.eval(p)? + g.eval(p)?))
    }

    /// `self - k * other`.
    pub fn sub_scaled(&self, k: f64, other: &ScalarField2) -> ScalarField2 {
        let (f, g) = (self.clone(), other.clone());
        ScalarField2::from_outcome_fn(move |p| Ok(f.eval(p)? - k * g.eval(p)?))
    }

    pub fn scale(&self, k: f64) -> ScalarField2 {
        let f = self.clone();
        ScalarField2::from_outcome_fn(move |p| Ok(k * f.eval(p)?))
    }

    /// View as an n-variable field with `n = 2`.
    pub fn to_field_n(&self) -> ScalarFieldN {
        let f = self.clone();
        ScalarFieldN::from_outcome_fn(2, move |x| f.eval(Point2::new(x[0], x[1])))
    }
}

impl fmt::Debug for ScalarField2 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("ScalarField2")
            .field("label", &self.label)
            .field("domain_hint", &self.domain_hint)
            .finish()
    }
}

/// A real function of `n ≥ 1` real variables.
#[derive(Clone)]
pub struct ScalarFieldN {
    arity: usize,
    eval: Arc<EvalN>,
}

impl ScalarFieldN {
    pub fn from_outcome_fn<F>(arity: usize, f: F) -> Self
    where
        F: Fn(&[f64]) -> EvalOutcome + Send + Sync + 'static,
    {
        assert!(arity >= 1, "arity must be positive");
        ScalarFieldN {
            arity,
            eval: Arc::new(move |x| finite(f(x))),
        }
    }

    pub fn from_fn<F>(arity: usize, f: F) -> Self
    where
        F: Fn(&[f64]) -> f64 + Send + Sync + 'static,
    {
        Self::from_outcome_fn(arity, move |x| Ok(f(x)))
    }

    pub fn parse(src: &str, arity: usize) -> std::result::Result<Self, ParseError> {
        let expr = Arc::new(Expr::parse(src, arity)?);
        Ok(Self::from_outcome_fn(arity, move |x| expr.eval(x)))
    }

    pub fn arity(&self) -> usize {
        self.arity
    }

    pub fn eval(&self, x: &[f64]) -> EvalOutcome {
        if x.len() != self.arity {
            return Err(DomainError::new(format!(
                "expected {} coordinates, got {}",
                self.arity,
                x.len()
            )));
        }
        (self.eval)(x)
    }
}

impl fmt::Debug for ScalarFieldN {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("ScalarFieldN").field("arity", &self.arity).finish()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn nan_becomes_domain_error() {
        let f = ScalarField2::from_fn(|p| (p.x1 - 1.0).sqrt());
        assert!(f.eval(Point2::new(0.0, 0.0)).is_err());
        assert_eq!(f.eval(Point2::new(5.0, 0.0)), Ok(2.0));
    }

    #[test]
    fn parsed_field_evaluates() {
        let f = ScalarField2::parse("3*x1*x2^2").unwrap();
        assert_eq!(f.at(2.0, 3.0).unwrap(), 54.0);
        assert_eq!(f.label(), Some("3*x1*x2^2"));
    }
}
