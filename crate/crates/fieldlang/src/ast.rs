use std::fmt;

/// Elementary functions known to the language.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Func {
    Exp,
    Sin,
    Cos,
    Sqrt,
    Ln,
}

impl Func {
    pub const ALL: [Func; 5] = [Func::Exp, Func::Sin, Func::Cos, Func::Sqrt, Func::Ln];

    pub fn name(self) -> &'static str {
        match self {
            Func::Exp => "exp",
            Func::Sin => "sin",
            Func::Cos => "cos",
            Func::Sqrt => "sqrt",
            Func::Ln => "ln",
        }
    }

    pub fn from_name(s: &str) -> Option<Func> {
        Func::ALL.into_iter().find(|f| f.name() == s)
    }

    /// Raw IEEE application; domain checks live in the evaluator.
    pub fn apply(self, v: f64) -> f64 {
        match self {
            Func::Exp => v.exp(),
            Func::Sin => v.sin(),
            Func::Cos => v.cos(),
            Func::Sqrt => v.sqrt(),
            Func::Ln => v.ln(),
        }
    }
}

/// Expression tree over three variables addressed by index.
#[derive(Debug, Clone, PartialEq)]
pub enum FieldExpr {
    Num(f64),
    Var(usize),
    Neg(Box<FieldExpr>),
    Add(Box<FieldExpr>, Box<FieldExpr>),
    Sub(Box<FieldExpr>, Box<FieldExpr>),
    Mul(Box<FieldExpr>, Box<FieldExpr>),
    Div(Box<FieldExpr>, Box<FieldExpr>),
    Pow(Box<FieldExpr>, Box<FieldExpr>),
    Call(Func, Box<FieldExpr>),
}

use FieldExpr::*;

fn is_num(e: &FieldExpr, v: f64) -> bool {
    matches!(e, Num(c) if *c == v)
}

// Smart constructors. They fold constant subtrees and drop additive zeros and
// multiplicative ones; nothing else is simplified.
impl FieldExpr {
    pub fn num(c: f64) -> Self {
        Num(c)
    }

    pub fn var(i: usize) -> Self {
        Var(i)
    }

    pub fn neg(a: Self) -> Self {
        match a {
            Num(c) => Num(-c),
            a => Neg(Box::new(a)),
        }
    }

    pub fn add(a: Self, b: Self) -> Self {
        match (a, b) {
            (Num(x), Num(y)) => Num(x + y),
            (a, b) if is_num(&a, 0.0) => b,
            (a, b) if is_num(&b, 0.0) => a,
            (a, b) => Add(Box::new(a), Box::new(b)),
        }
    }

    pub fn sub(a: Self, b: Self) -> Self {
        match (a, b) {
            (Num(x), Num(y)) => Num(x - y),
            (a, b) if is_num(&b, 0.0) => a,
            (a, b) if is_num(&a, 0.0) => Self::neg(b),
            (a, b) => Sub(Box::new(a), Box::new(b)),
        }
    }

    pub fn mul(a: Self, b: Self) -> Self {
        match (a, b) {
            (Num(x), Num(y)) => Num(x * y),
            (a, _) if is_num(&a, 0.0) => Num(0.0),
            (_, b) if is_num(&b, 0.0) => Num(0.0),
            (a, b) if is_num(&a, 1.0) => b,
            (a, b) if is_num(&b, 1.0) => a,
            (a, b) => Mul(Box::new(a), Box::new(b)),
        }
    }

    pub fn div(a: Self, b: Self) -> Self {
        match (a, b) {
            (Num(x), Num(y)) if y != 0.0 => Num(x / y),
            (a, b) if is_num(&a, 0.0) && !is_num(&b, 0.0) => Num(0.0),
            (a, b) if is_num(&b, 1.0) => a,
            (a, b) => Div(Box::new(a), Box::new(b)),
        }
    }

    pub fn pow(a: Self, b: Self) -> Self {
        if let (Num(x), Num(y)) = (&a, &b) {
            let v = x.powf(*y);
            if v.is_finite() {
                return Num(v);
            }
        }
        Pow(Box::new(a), Box::new(b))
    }

    pub fn call(f: Func, a: Self) -> Self {
        if let Num(c) = a {
            let v = f.apply(c);
            if v.is_finite() {
                return Num(v);
            }
        }
        Call(f, Box::new(a))
    }

    /// True when no variable occurs in the tree.
    pub fn is_constant(&self) -> bool {
        !self.uses_any()
    }

    fn uses_any(&self) -> bool {
        (0..3).any(|v| self.uses(v))
    }

    /// True when variable `v` occurs in the tree.
    pub fn uses(&self, v: usize) -> bool {
        match self {
            Num(_) => false,
            Var(i) => *i == v,
            Neg(a) | Call(_, a) => a.uses(v),
            Add(a, b) | Sub(a, b) | Mul(a, b) | Div(a, b) | Pow(a, b) => a.uses(v) || b.uses(v),
        }
    }

    /// Replace each variable by the given expression (simultaneously).
    pub fn substitute(&self, with: &[FieldExpr; 3]) -> FieldExpr {
        match self {
            Num(c) => Num(*c),
            Var(i) => with[*i].clone(),
            Neg(a) => Self::neg(a.substitute(with)),
            Add(a, b) => Self::add(a.substitute(with), b.substitute(with)),
            Sub(a, b) => Self::sub(a.substitute(with), b.substitute(with)),
            Mul(a, b) => Self::mul(a.substitute(with), b.substitute(with)),
            Div(a, b) => Self::div(a.substitute(with), b.substitute(with)),
            Pow(a, b) => Self::pow(a.substitute(with), b.substitute(with)),
            Call(f, a) => Self::call(*f, a.substitute(with)),
        }
    }

    /// Printable view using the given variable names.
    pub fn display<'a>(&'a self, vars: &'a VarSet) -> Display<'a> {
        Display { expr: self, vars }
    }

    pub(crate) fn precedence(&self) -> u8 {
        match self {
            Add(..) | Sub(..) => 1,
            Mul(..) | Div(..) => 2,
            Neg(_) => 3,
            Pow(..) => 4,
            Num(_) | Var(_) | Call(..) => 5,
        }
    }
}

impl std::ops::Add for FieldExpr {
    type Output = FieldExpr;
    fn add(self, rhs: Self) -> Self {
        FieldExpr::add(self, rhs)
    }
}

impl std::ops::Sub for FieldExpr {
    type Output = FieldExpr;
    fn sub(self, rhs: Self) -> Self {
        FieldExpr::sub(self, rhs)
    }
}

impl std::ops::Mul for FieldExpr {
    type Output = FieldExpr;
    fn mul(self, rhs: Self) -> Self {
        FieldExpr::mul(self, rhs)
    }
}

impl std::ops::Div for FieldExpr {
    type Output = FieldExpr;
    fn div(self, rhs: Self) -> Self {
        FieldExpr::div(self, rhs)
    }
}

impl std::ops::Neg for FieldExpr {
    type Output = FieldExpr;
    fn neg(self) -> Self {
        FieldExpr::neg(self)
    }
}

/// The three variable names an expression is written in.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct VarSet {
    names: [String; 3],
}

impl VarSet {
    pub fn new(names: [&str; 3]) -> Self {
        VarSet {
            names: names.map(str::to_owned),
        }
    }

    pub fn xyz() -> Self {
        Self::new(["x", "y", "z"])
    }

    pub fn names(&self) -> &[String; 3] {
        &self.names
    }

    pub fn name(&self, i: usize) -> &str {
        &self.names[i]
    }

    pub fn index_of(&self, name: &str) -> Option<usize> {
        self.names.iter().position(|n| n == name)
    }
}

impl Default for VarSet {
    fn default() -> Self {
        Self::xyz()
    }
}

pub struct Display<'a> {
    expr: &'a FieldExpr,
    vars: &'a VarSet,
}

impl fmt::Display for Display<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write_expr(f, self.expr, self.vars, 0)
    }
}

impl fmt::Display for FieldExpr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write_expr(f, self, &VarSet::xyz(), 0)
    }
}

fn write_expr(f: &mut fmt::Formatter<'_>, e: &FieldExpr, vars: &VarSet, min_prec: u8) -> fmt::Result {
    let paren = e.precedence() < min_prec;
    if paren {
        f.write_str("(")?;
    }
    match e {
        Num(c) if *c < 0.0 || (*c == 0.0 && c.is_sign_negative()) => write!(f, "(-{})", -c)?,
        Num(c) => write!(f, "{c}")?,
        Var(i) => f.write_str(vars.name(*i))?,
        Neg(a) => {
            f.write_str("-")?;
            write_expr(f, a, vars, 3)?;
        }
        Add(a, b) | Sub(a, b) => {
            write_expr(f, a, vars, 1)?;
            f.write_str(if matches!(e, Add(..)) { " + " } else { " - " })?;
            write_expr(f, b, vars, 2)?;
        }
        Mul(a, b) | Div(a, b) => {
            write_expr(f, a, vars, 2)?;
            f.write_str(if matches!(e, Mul(..)) { "*" } else { "/" })?;
            write_expr(f, b, vars, 3)?;
        }
        Pow(a, b) => {
            write_expr(f, a, vars, 5)?;
            f.write_str("^")?;
            write_expr(f, b, vars, 3)?;
        }
        Call(func, a) => {
            write!(f, "{}(", func.name())?;
            write_expr(f, a, vars, 0)?;
            f.write_str(")")?;
        }
    }
    if paren {
        f.write_str(")")?;
    }
    Ok(())
}
