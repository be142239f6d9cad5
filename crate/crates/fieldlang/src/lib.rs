//! Expression language for scalar and vector fields.
//!
//! ```text
//! expr    = term , { ( "+" | "-" ) , term } ;
//! term    = unary , { ( "*" | "/" ) , unary } ;
//! unary   = "-" , unary | power ;
//! power   = primary , [ "^" , unary ] ;
//! primary = number | variable | func , "(" , expr , ")" | "(" , expr , ")" ;
//! func    = "exp" | "sin" | "cos" | "sqrt" | "ln" ;
//! number  = ( digits , [ "." , [ digits ] ] | "." , digits ) ,
//!           [ ( "e" | "E" ) , [ "+" | "-" ] , digits ] ;
//! ```
//!
//! `variable` is one of the three declared names (`x`, `y`, `z` by default).

mod ast;
mod diff;
mod eval;
mod exponent;
mod field;
mod parse;

pub use ast::{Display, FieldExpr, Func, VarSet};
pub use eval::{EvalError, EvalErrorKind};
pub use exponent::{endpoint_exponent, leading_exponent, ExponentError, Leading};
pub use field::{ScalarField, VectorField};
pub use parse::{parse, parse_with, ParseError};
