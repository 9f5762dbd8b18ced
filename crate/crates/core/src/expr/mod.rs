//! A small expression language for real functions of `x1..xn`.
//!
//! Supports `+ - * / ^`, unary minus, the constants `pi` and `e`, the
//! functions `sin cos tan atan exp ln sqrt abs min max pow`, and a
//! conditional `if(lhs CMP rhs, then, else)` with `CMP` one of
//! `< <= > >= ==`. `x, y` and `u, v` alias `x1, x2`.

mod ast;
mod eval;
mod lexer;
mod parser;

use std::fmt;

pub use ast::{BinOp, CmpOp, Func, Node, UnaryOp};
pub use lexer::{tokenize, Token, TokenKind};

use crate::domain::EvalOutcome;
use crate::error::{DomainError, ParseError};

/// A parsed expression together with the arity it was parsed for.
#[derive(Debug, Clone, PartialEq)]
pub struct Expr {
    root: Node,
    arity: usize,
}

impl Expr {
    pub fn parse(src: &str, arity: usize) -> Result<Self, ParseError> {
        if arity == 0 {
            return Err(ParseError {
                position: 0,
                expected: "positive arity".into(),
                found: "0".into(),
            });
        }
        Ok(Expr {
            root: parser::parse(src, arity)?,
            arity,
        })
    }

    pub fn root(&self) -> &Node {
        &self.root
    }

    pub fn arity(&self) -> usize {
        self.arity
    }

    pub fn eval(&self, point: &[f64]) -> EvalOutcome {
        if point.len() != self.arity {
            return Err(DomainError::new(format!(
                "expression takes {} coordinates, got {}",
                self.arity,
                point.len()
            )));
        }
        eval::eval(&self.root, point)
    }
}

impl fmt::Display for Expr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.root.fmt(f)
    }
}

/// Parse `src` as an expression in `arity` variables.
pub fn parse(src: &str, arity: usize) -> Result<Node, ParseError> {
    Expr::parse(src, arity).map(|e| e.root)
}

/// Evaluate a tree at `point`. Out-of-range variables are a domain error.
pub fn evaluate(node: &Node, point: &[f64]) -> EvalOutcome {
    eval::eval(node, point)
}
