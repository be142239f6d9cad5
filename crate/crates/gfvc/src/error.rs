use fieldlang::{EvalError, ExponentError};
use specfun::SpecFunError;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum Error {
    #[error("domain error: {0}")]
    Domain(String),
    #[error("accuracy error in {context}: best estimate {estimate}, error bound {error_bound}")]
    Accuracy {
        context: String,
        estimate: f64,
        error_bound: f64,
    },
    #[error("invalid geometry: {}", .0.join("; "))]
    Geometry(Vec<String>),
    #[error(transparent)]
    Eval(#[from] EvalError),
    #[error(transparent)]
    SpecFun(#[from] SpecFunError),
    #[error(transparent)]
    Exponent(#[from] ExponentError),
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn domain<T>(msg: impl Into<String>) -> Result<T> {
    Err(Error::Domain(msg.into()))
}
