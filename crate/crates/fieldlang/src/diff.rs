use crate::ast::{FieldExpr, Func};

type E = FieldExpr;

impl FieldExpr {
    /// Symbolic partial derivative with respect to variable `v`.
    pub fn diff(&self, v: usize) -> FieldExpr {
        use FieldExpr::*;
        match self {
            Num(_) => E::num(0.0),
            Var(i) => E::num(if *i == v { 1.0 } else { 0.0 }),
            Neg(a) => E::neg(a.diff(v)),
            Add(a, b) => E::add(a.diff(v), b.diff(v)),
            Sub(a, b) => E::sub(a.diff(v), b.diff(v)),
            Mul(a, b) => E::add(
                E::mul(a.diff(v), (**b).clone()),
                E::mul((**a).clone(), b.diff(v)),
            ),
            Div(a, b) => {
                let num = E::sub(
                    E::mul(a.diff(v), (**b).clone()),
                    E::mul((**a).clone(), b.diff(v)),
                );
                E::div(num, E::pow((**b).clone(), E::num(2.0)))
            }
            Pow(a, b) if !b.uses(v) => {
                let outer = E::mul(
                    (**b).clone(),
                    E::pow((**a).clone(), E::sub((**b).clone(), E::num(1.0))),
                );
                E::mul(outer, a.diff(v))
            }
            Pow(a, b) => {
                // a^b (b' ln a + b a'/a)
                let log_part = E::mul(b.diff(v), E::call(Func::Ln, (**a).clone()));
                let base_part = E::div(E::mul((**b).clone(), a.diff(v)), (**a).clone());
                E::mul(self.clone(), E::add(log_part, base_part))
            }
            Call(f, a) => {
                let inner = a.diff(v);
                let outer = match f {
                    Func::Exp => self.clone(),
                    Func::Sin => E::call(Func::Cos, (**a).clone()),
                    Func::Cos => E::neg(E::call(Func::Sin, (**a).clone())),
                    Func::Sqrt => E::div(E::num(1.0), E::mul(E::num(2.0), self.clone())),
                    Func::Ln => E::div(E::num(1.0), (**a).clone()),
                };
                E::mul(outer, inner)
            }
        }
    }
}
