use crate::ast::{FieldExpr, Func};

/// Leading behaviour of an expression as one variable tends to 0+.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Leading {
    /// Identically zero.
    Zero,
    /// Behaves like var^p times a nonvanishing factor (as far as syntax can tell).
    Power(f64),
    /// Syntax does not determine the behaviour.
    Unknown,
}

impl Leading {
    fn combine_sum(self, other: Leading) -> Leading {
        match (self, other) {
            (Leading::Zero, o) | (o, Leading::Zero) => o,
            (Leading::Power(p), Leading::Power(q)) => Leading::Power(p.min(q)),
            _ => Leading::Unknown,
        }
    }
}

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
#[error("leading exponent {exponent} <= -1: not integrable at 0")]
pub struct ExponentError {
    pub exponent: f64,
}

/// Syntactic leading exponent in variable `v`; other variables count as nonzero constants.
pub fn leading_exponent(e: &FieldExpr, v: usize) -> Leading {
    use FieldExpr::*;
    match e {
        Num(c) if *c == 0.0 => Leading::Zero,
        Num(_) => Leading::Power(0.0),
        Var(i) if *i == v => Leading::Power(1.0),
        Var(_) => Leading::Power(0.0),
        Neg(a) => leading_exponent(a, v),
        Add(a, b) | Sub(a, b) => leading_exponent(a, v).combine_sum(leading_exponent(b, v)),
        Mul(a, b) => match (leading_exponent(a, v), leading_exponent(b, v)) {
            (Leading::Zero, _) | (_, Leading::Zero) => Leading::Zero,
            (Leading::Power(p), Leading::Power(q)) => Leading::Power(p + q),
            _ => Leading::Unknown,
        },
        Div(a, b) => match (leading_exponent(a, v), leading_exponent(b, v)) {
            (Leading::Zero, _) => Leading::Zero,
            (Leading::Power(p), Leading::Power(q)) => Leading::Power(p - q),
            _ => Leading::Unknown,
        },
        Pow(a, b) => {
            if !b.is_constant() {
                return Leading::Unknown;
            }
            let Ok(c) = b.eval(&[0.0; 3]) else {
                return Leading::Unknown;
            };
            match leading_exponent(a, v) {
                Leading::Zero if c > 0.0 => Leading::Zero,
                Leading::Power(p) => Leading::Power(p * c),
                _ => Leading::Unknown,
            }
        }
        Call(f, a) => {
            let inner = leading_exponent(a, v);
            match (f, inner) {
                (Func::Exp | Func::Cos, Leading::Zero) => Leading::Power(0.0),
                (Func::Sin | Func::Sqrt, Leading::Zero) => Leading::Zero,
                (Func::Exp | Func::Cos, Leading::Power(p)) if p >= 0.0 => Leading::Power(0.0),
                (Func::Sin, Leading::Power(p)) if p >= 0.0 => Leading::Power(p),
                (Func::Sqrt, Leading::Power(p)) => Leading::Power(0.5 * p),
                (Func::Ln, Leading::Power(p)) if p == 0.0 => Leading::Power(0.0),
                _ => Leading::Unknown,
            }
        }
    }
}

/// Endpoint exponent in (-1, 0] used to place quadrature weights.
///
/// Expressions finite at 0 give 0. Unknown behaviour falls back to 0 with a warning.
pub fn endpoint_exponent(e: &FieldExpr, v: usize) -> Result<f64, ExponentError> {
    match leading_exponent(e, v) {
        Leading::Zero => Ok(0.0),
        Leading::Power(p) if p <= -1.0 => Err(ExponentError { exponent: p }),
        Leading::Power(p) => Ok(p.min(0.0)),
        Leading::Unknown => {
            log::warn!("could not infer the endpoint exponent of `{e}`; assuming 0");
            Ok(0.0)
        }
    }
}
