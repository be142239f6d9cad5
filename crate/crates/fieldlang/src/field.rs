use crate::ast::{FieldExpr, VarSet};
use crate::eval::EvalError;
use crate::parse::{parse_with, ParseError};

/// A scalar field U(q1, q2, q3).
#[derive(Debug, Clone, PartialEq)]
pub struct ScalarField {
    pub expr: FieldExpr,
    pub vars: VarSet,
}

impl ScalarField {
    pub fn new(expr: FieldExpr, vars: VarSet) -> Self {
        ScalarField { expr, vars }
    }

    pub fn parse(text: &str, vars: &VarSet) -> Result<Self, ParseError> {
        Ok(ScalarField {
            expr: parse_with(text, vars)?,
            vars: vars.clone(),
        })
    }

    pub fn eval(&self, p: &[f64; 3]) -> Result<f64, EvalError> {
        self.expr.eval(p)
    }

    pub fn diff(&self, axis: usize) -> ScalarField {
        ScalarField {
            expr: self.expr.diff(axis),
            vars: self.vars.clone(),
        }
    }

    pub fn text(&self) -> String {
        self.expr.display(&self.vars).to_string()
    }
}

/// A vector field with three components over a shared variable set.
#[derive(Debug, Clone, PartialEq)]
pub struct VectorField {
    pub comps: [FieldExpr; 3],
    pub vars: VarSet,
}

impl VectorField {
    pub fn new(comps: [FieldExpr; 3], vars: VarSet) -> Self {
        VectorField { comps, vars }
    }

    pub fn parse(texts: [&str; 3], vars: &VarSet) -> Result<Self, ParseError> {
        let [a, b, c] = texts;
        Ok(VectorField {
            comps: [parse_with(a, vars)?, parse_with(b, vars)?, parse_with(c, vars)?],
            vars: vars.clone(),
        })
    }

    pub fn component(&self, k: usize) -> ScalarField {
        ScalarField {
            expr: self.comps[k].clone(),
            vars: self.vars.clone(),
        }
    }

    pub fn eval(&self, p: &[f64; 3]) -> Result<[f64; 3], EvalError> {
        Ok([self.comps[0].eval(p)?, self.comps[1].eval(p)?, self.comps[2].eval(p)?])
    }

    pub fn text(&self) -> String {
        let [a, b, c] = &self.comps;
        format!(
            "({}, {}, {})",
            a.display(&self.vars),
            b.display(&self.vars),
            c.display(&self.vars)
        )
    }
}
