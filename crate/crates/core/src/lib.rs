//! Exact computations in the S_M-extended Heisenberg algebra of the
//! Calogero model: Fock-space actions, Gram matrices of multi-particle
//! states, single-mode operator series and symmetric-polynomial expansions
//! of exchange and transition operators.

pub mod fock;
pub mod gram;
pub mod linalg;
pub mod opexpr;
pub mod scalar;
pub mod singlemode;
