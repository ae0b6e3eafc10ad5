//! Exact elimination over rationals and rational functions, plus a small
//! symmetric eigensolver for evaluated Gram matrices.

mod exact;
mod jacobi;

pub use exact::{rank_exact, solve, Field, LinalgError, Solution};
pub use jacobi::{symmetric_eigenvalues, NoConvergence};
