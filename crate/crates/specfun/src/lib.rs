//! Real special functions used by the kernel catalog.
//!
//! Everything here is a pure function of its arguments. Series-based
//! functions report an error estimate alongside the value and refuse to
//! answer when they cannot meet their budget.

use std::f64::consts::PI;

mod bessel;
mod erf;
mod gamma;
mod hyper;

pub use bessel::{bessel_i, bessel_j};
pub use erf::{erf, erfc, erfcx};
pub use gamma::{gamma, lgamma, lower_incomplete_gamma, rgamma, upper_incomplete_gamma};
pub use hyper::{kummer, mittag_leffler, ML_ABS_BUDGET, SERIES_TERM_CAP};

pub(crate) const FRAC_1_SQRT_PI: f64 = 0.564_189_583_547_756_3;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum SpecFunError {
    #[error("{func}: argument outside the domain ({detail})")]
    Domain { func: &'static str, detail: String },
    #[error("{func}: accuracy budget exceeded (best {value}, est. error {est_abs_error})")]
    Accuracy {
        func: &'static str,
        value: f64,
        est_abs_error: f64,
    },
}

pub type Result<T> = std::result::Result<T, SpecFunError>;

/// A value together with an estimated bound on its absolute error.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SpecFunResult {
    pub value: f64,
    pub est_abs_error: f64,
}

pub(crate) fn domain<T>(func: &'static str, detail: impl Into<String>) -> Result<T> {
    Err(SpecFunError::Domain {
        func,
        detail: detail.into(),
    })
}

/// Neumaier compensated accumulator.
#[derive(Debug, Default, Clone, Copy)]
pub(crate) struct Neumaier {
    sum: f64,
    comp: f64,
}

impl Neumaier {
    pub(crate) fn add(&mut self, x: f64) {
        let t = self.sum + x;
        if self.sum.abs() >= x.abs() {
            self.comp += (self.sum - t) + x;
        } else {
            self.comp += (x - t) + self.sum;
        }
        self.sum = t;
    }

    pub(crate) fn value(&self) -> f64 {
        self.sum + self.comp
    }
}

/// `sin(pi x)` with exact zeros at integers.
pub(crate) fn sin_pi(x: f64) -> f64 {
    let r = x - 2.0 * (x / 2.0).floor();
    if r == 0.0 || r == 1.0 {
        return 0.0;
    }
    if r == 0.5 {
        return 1.0;
    }
    if r == 1.5 {
        return -1.0;
    }
    (PI * r).sin()
}
