//! General fractional vector calculus: Sonin kernel pairs, weakly singular
//! quadrature, one-dimensional operators, and their vector extensions.

pub mod error;
pub mod fields;
pub mod geometry;
pub mod gfc1d;
pub mod gfint;
pub mod kernels;
pub mod occ;
pub mod quad;
pub mod theorems;
pub mod vectorops;

pub use error::{Error, Result};
pub use kernels::{KernelFamily, KernelPair, Side, SoninReport};
pub use quad::{QuadResult, QuadSpec};
