//! Exact scalars: rationals, polynomials in the coupling ν, and rational
//! functions of ν.
//!
//! [`NuScalar`] is the coefficient type used everywhere else in the crate.
//! Concrete couplings are just constant `NuScalar`s, so the same code paths
//! serve both symbolic and evaluated computations.

mod nu;
mod poly;
mod rat;

pub use nu::NuScalar;
pub use poly::NuPoly;
pub use rat::{Float, Rat};

use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ScalarError {
    #[error("division by zero")]
    DivideByZero,
    #[error("pole at nu = {at}: denominator {denominator} vanishes")]
    Pole { denominator: NuPoly, at: Rat },
    #[error("cannot parse rational from {0:?}")]
    Parse(String),
}
