use crate::ast::{FieldExpr, Func};
use std::fmt;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum EvalErrorKind {
    DivisionByZero,
    InvalidPower,
    NegativeSqrt,
    NonPositiveLog,
    NotFinite,
}

impl fmt::Display for EvalErrorKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            EvalErrorKind::DivisionByZero => "division by zero",
            EvalErrorKind::InvalidPower => "invalid power",
            EvalErrorKind::NegativeSqrt => "square root of a negative number",
            EvalErrorKind::NonPositiveLog => "logarithm of a nonpositive number",
            EvalErrorKind::NotFinite => "non-finite result",
        })
    }
}

/// Evaluation failure; `node` is the offending subexpression.
#[derive(Debug, Clone, PartialEq, thiserror::Error)]
#[error("{kind} in `{node}` at ({}, {}, {})", point[0], point[1], point[2])]
pub struct EvalError {
    pub kind: EvalErrorKind,
    pub node: FieldExpr,
    pub point: [f64; 3],
}

fn fail(kind: EvalErrorKind, node: &FieldExpr, point: &[f64; 3]) -> EvalError {
    EvalError {
        kind,
        node: node.clone(),
        point: *point,
    }
}

impl FieldExpr {
    /// IEEE evaluation at a point.
    pub fn eval(&self, p: &[f64; 3]) -> Result<f64, EvalError> {
        use FieldExpr::*;
        Ok(match self {
            Num(c) => *c,
            Var(i) => p[*i],
            Neg(a) => -a.eval(p)?,
            Add(a, b) => a.eval(p)? + b.eval(p)?,
            Sub(a, b) => a.eval(p)? - b.eval(p)?,
            Mul(a, b) => a.eval(p)? * b.eval(p)?,
            Div(a, b) => {
                let num = a.eval(p)?;
                let den = b.eval(p)?;
                if den == 0.0 {
                    return Err(fail(EvalErrorKind::DivisionByZero, self, p));
                }
                num / den
            }
            Pow(a, b) => {
                let base = a.eval(p)?;
                let e = b.eval(p)?;
                let integral = e == e.trunc() && e.abs() <= 64.0;
                if base < 0.0 && !integral {
                    return Err(fail(EvalErrorKind::InvalidPower, self, p));
                }
                if base == 0.0 && e < 0.0 {
                    return Err(fail(EvalErrorKind::DivisionByZero, self, p));
                }
                let v = if integral { base.powi(e as i32) } else { base.powf(e) };
                if !v.is_finite() {
                    return Err(fail(EvalErrorKind::NotFinite, self, p));
                }
                v
            }
            Call(f, a) => {
                let v = a.eval(p)?;
                match f {
                    Func::Sqrt if v < 0.0 => return Err(fail(EvalErrorKind::NegativeSqrt, self, p)),
                    Func::Ln if v <= 0.0 => return Err(fail(EvalErrorKind::NonPositiveLog, self, p)),
                    _ => {}
                }
                let r = f.apply(v);
                if !r.is_finite() {
                    return Err(fail(EvalErrorKind::NotFinite, self, p));
                }
                r
            }
        })
    }
}
