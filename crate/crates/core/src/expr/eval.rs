use super::ast::{BinOp, Func, Node};
use crate::domain::EvalOutcome;
use crate::error::DomainError;

#[inline]
fn checked(v: f64, what: &str) -> EvalOutcome {
    if v.is_finite() {
        Ok(v)
    } else {
        Err(DomainError::new(format!("{what} produced {v}")))
    }
}

fn pow(base: f64, exponent: f64) -> EvalOutcome {
    if base < 0.0 && exponent.fract() != 0.0 {
        return Err(DomainError::new(format!(
            "negative base {base} with non-integer exponent {exponent}"
        )));
    }
    if base == 0.0 && exponent < 0.0 {
        return Err(DomainError::new("zero raised to a negative power"));
    }
    // 0^0 = 1 (powf agrees)
    let v = if exponent.fract() == 0.0 && exponent.abs() <= 64.0 {
        base.powi(exponent as i32)
    } else {
        base.powf(exponent)
    };
    checked(v, "power")
}

pub fn eval(node: &Node, x: &[f64]) -> EvalOutcome {
    match node {
        Node::Number(v) => Ok(*v),
        Node::Var(k) => x
            .get(k - 1)
            .copied()
            .ok_or_else(|| DomainError::new(format!("x{k} not bound"))),
        Node::Unary { child, .. } => Ok(-eval(child, x)?),
        Node::Binary { op, lhs, rhs } => {
            let l = eval(lhs, x)?;
            let r = eval(rhs, x)?;
            match op {
                BinOp::Add => checked(l + r, "addition"),
                BinOp::Sub => checked(l - r, "subtraction"),
                BinOp::Mul => checked(l * r, "multiplication"),
                BinOp::Div => {
                    if r == 0.0 {
                        Err(DomainError::new("division by zero"))
                    } else {
                        checked(l / r, "division")
                    }
                }
                BinOp::Pow => pow(l, r),
            }
        }
        Node::Call { func, args } => {
            let a = eval(&args[0], x)?;
            match func {
                Func::Sin => Ok(a.sin()),
                Func::Cos => Ok(a.cos()),
                Func::Tan => checked(a.tan(), "tan"),
                Func::Atan => Ok(a.atan()),
                Func::Exp => checked(a.exp(), "exp"),
                Func::Ln => {
                    if a <= 0.0 {
                        Err(DomainError::new(format!("ln of non-positive {a}")))
                    } else {
                        Ok(a.ln())
                    }
                }
                Func::Sqrt => {
                    if a < 0.0 {
                        Err(DomainError::new(format!("sqrt of negative {a}")))
                    } else {
                        Ok(a.sqrt())
                    }
                }
                Func::Abs => Ok(a.abs()),
                Func::Min => Ok(a.min(eval(&args[1], x)?)),
                Func::Max => Ok(a.max(eval(&args[1], x)?)),
                Func::Pow => pow(a, eval(&args[1], x)?),
            }
        }
        Node::Cond {
            cmp,
            lhs,
            rhs,
            then,
            otherwise,
        } => {
            if cmp.holds(eval(lhs, x)?, eval(rhs, x)?) {
                eval(then, x)
            } else {
                eval(otherwise, x)
            }
        }
    }
}
