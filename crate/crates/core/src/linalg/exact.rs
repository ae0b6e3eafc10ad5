use std::fmt::Debug;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Zero};
use thiserror::Error;

use crate::scalar::{NuScalar, Rat};

/// Exact field operations needed by the elimination routines.
pub trait Field: Clone + PartialEq + Debug + Send + Sync {
    fn zero() -> Self;
    fn one() -> Self;
    fn is_zero(&self) -> bool;
    fn fadd(&self, rhs: &Self) -> Self;
    fn fsub(&self, rhs: &Self) -> Self;
    fn fmul(&self, rhs: &Self) -> Self;
    /// `rhs` is nonzero.
    fn fdiv(&self, rhs: &Self) -> Self;
}

impl Field for Rat {
    fn zero() -> Self {
        Rat::zero()
    }
    fn one() -> Self {
        Rat::one()
    }
    fn is_zero(&self) -> bool {
        Rat::is_zero(self)
    }
    fn fadd(&self, rhs: &Self) -> Self {
        self + rhs
    }
    fn fsub(&self, rhs: &Self) -> Self {
        self - rhs
    }
    fn fmul(&self, rhs: &Self) -> Self {
        self * rhs
    }
    fn fdiv(&self, rhs: &Self) -> Self {
        self / rhs
    }
}

impl Field for NuScalar {
    fn zero() -> Self {
        NuScalar::zero()
    }
    fn one() -> Self {
        NuScalar::one()
    }
    fn is_zero(&self) -> bool {
        NuScalar::is_zero(self)
    }
    fn fadd(&self, rhs: &Self) -> Self {
        self + rhs
    }
    fn fsub(&self, rhs: &Self) -> Self {
        self - rhs
    }
    fn fmul(&self, rhs: &Self) -> Self {
        self * rhs
    }
    fn fdiv(&self, rhs: &Self) -> Self {
        self / rhs
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum LinalgError {
    #[error("inconsistent linear system (row {row} reduces to 0 = nonzero)")]
    Inconsistent { row: usize },
    #[error("matrix shape mismatch: {0}")]
    Shape(String),
}

/// Reduced row echelon solution of `A X = B` for several right-hand sides.
#[derive(Debug, Clone)]
pub struct Solution<F> {
    /// One row per unknown, one column per right-hand side. Free unknowns are zero.
    pub x: Vec<Vec<F>>,
    /// Pivot column of each pivot row, in elimination order.
    pub pivot_columns: Vec<usize>,
    /// Pivot values before normalization, in elimination order.
    pub pivots: Vec<F>,
}

impl<F> Solution<F> {
    pub fn rank(&self) -> usize {
        self.pivot_columns.len()
    }
}

/// Gauss-Jordan elimination with first-nonzero pivoting in row order.
///
/// Underdetermined systems get the solution with every free unknown set to
/// zero, so the result is deterministic.
pub fn solve<F: Field>(a: &[Vec<F>], b: &[Vec<F>]) -> Result<Solution<F>, LinalgError> {
    let rows = a.len();
    let cols = a.first().map_or(0, Vec::len);
    let rhs = b.first().map_or(0, Vec::len);
    if b.len() != rows || a.iter().any(|r| r.len() != cols) || b.iter().any(|r| r.len() != rhs) {
        return Err(LinalgError::Shape(format!(
            "A is {rows}x{cols}, B has {} rows",
            b.len()
        )));
    }
    let mut m: Vec<Vec<F>> = a
        .iter()
        .zip(b)
        .map(|(ra, rb)| ra.iter().chain(rb).cloned().collect())
        .collect();
    let width = cols + rhs;
    let mut pivot_columns = Vec::new();
    let mut pivots = Vec::new();
    let mut next = 0;
    for col in 0..cols {
        let Some(p) = (next..rows).find(|&r| !m[r][col].is_zero()) else {
            continue;
        };
        m.swap(next, p);
        let pivot = m[next][col].clone();
        for x in &mut m[next][col..width] {
            *x = x.fdiv(&pivot);
        }
        let (before, rest) = m.split_at_mut(next);
        let (prow, after) = rest.split_first_mut().expect("pivot row exists");
        for row in before.iter_mut().chain(after.iter_mut()) {
            let factor = row[col].clone();
            if factor.is_zero() {
                continue;
            }
            for c in col..width {
                if !prow[c].is_zero() {
                    row[c] = row[c].fsub(&factor.fmul(&prow[c]));
                }
            }
        }
        pivot_columns.push(col);
        pivots.push(pivot);
        next += 1;
        if next == rows {
            break;
        }
    }
    if let Some(row) = (next..rows).find(|&r| m[r][cols..].iter().any(|v| !v.is_zero())) {
        return Err(LinalgError::Inconsistent { row });
    }
    let mut x = vec![vec![F::zero(); rhs]; cols];
    for (k, &col) in pivot_columns.iter().enumerate() {
        x[col] = m[k][cols..].to_vec();
    }
    Ok(Solution {
        x,
        pivot_columns,
        pivots,
    })
}

/// Rank over the rationals by fraction-free (Bareiss) elimination.
///
/// Each row is first scaled to integers; afterwards every intermediate entry
/// is a minor of the scaled matrix, so the divisions are exact.
pub fn rank_exact(m: &[Vec<Rat>]) -> usize {
    let mut a: Vec<Vec<BigInt>> = m.iter().map(|row| integer_row(row)).collect();
    let rows = a.len();
    let cols = a.first().map_or(0, Vec::len);
    let mut prev = BigInt::one();
    let mut rank = 0;
    for col in 0..cols {
        if rank == rows {
            break;
        }
        let Some(p) = (rank..rows).find(|&r| !a[r][col].is_zero()) else {
            continue;
        };
        a.swap(rank, p);
        let pivot = a[rank][col].clone();
        let (top, bottom) = a.split_at_mut(rank + 1);
        let prow = &top[rank];
        for row in bottom.iter_mut() {
            let lead = std::mem::take(&mut row[col]);
            for c in col + 1..cols {
                let v = &row[c] * &pivot - &lead * &prow[c];
                row[c] = if prev.is_one() { v } else { v / &prev };
            }
        }
        prev = pivot;
        rank += 1;
    }
    rank
}

fn integer_row(row: &[Rat]) -> Vec<BigInt> {
    let lcm = row
        .iter()
        .fold(BigInt::one(), |acc, x| acc.lcm(x.denom()));
    row.iter()
        .map(|x| x.numer() * (&lcm / x.denom()))
        .collect()
}
