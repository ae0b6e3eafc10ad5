//! Normally ordered expansions of degree-preserving operators, fitted degree
//! by degree against their exact actions on monomial states.
//!
//! A balanced word `a†^c a^q` of degree `d` sends a degree-`d` monomial `s` to
//! `⟨q|s⟩ a†^c|0⟩`. With the lower-degree part already fixed, the degree-`d`
//! coefficients `X[c][q]` must satisfy `X G = R`, where `G` is the multiset
//! Gram matrix and `R[c][s]` the residual of the target on `s`.
//!
//! When `G` is singular only the Gram-weighted system `G X G = G R` can be
//! asked for: the fitted action then agrees with the target up to null
//! states. It is solved on a maximal nonsingular principal block `P` of `G`,
//! `X_PP = G_PP⁻¹ (GR)_PP G_PP⁻¹`, with every other coefficient zero.

use std::collections::HashMap;
use std::fmt;
use std::str::FromStr;

use rayon::prelude::*;
use serde::Serialize;

use super::{OpError, OperatorExpr};
use crate::fock::{occupations_of_degree, AlgebraParams, BasisKind, FockState, Guards, Occupation};
use crate::gram::build_gram;
use crate::linalg::{self, Field};
use crate::scalar::{NuScalar, Rat};

/// Operator whose expansion is fitted. Modes are 0-based.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum FitTarget {
    /// `K_ij`
    Exchange(usize, usize),
    /// `N_ij`; `N_ii` is the partial number operator.
    Transition(usize, usize),
    /// `N = Σ_i N_ii`
    TotalNumber,
    /// `a_i a_j†`
    Product(usize, usize),
}

impl FitTarget {
    pub fn validate(&self, modes: usize) -> Result<(), OpError> {
        let pair = match *self {
            FitTarget::Exchange(i, j) if i == j => {
                return Err(OpError::UnknownTarget(format!("{self} (identical modes)")))
            }
            FitTarget::Exchange(i, j) | FitTarget::Transition(i, j) | FitTarget::Product(i, j) => {
                Some((i, j))
            }
            FitTarget::TotalNumber => None,
        };
        match pair {
            Some((i, j)) if i.max(j) >= modes => Err(OpError::WrongModes(self.to_string(), i.max(j) + 1)),
            _ => Ok(()),
        }
    }

    pub fn act(&self, params: &AlgebraParams, s: &FockState) -> FockState {
        match *self {
            FitTarget::Exchange(i, j) => s.exchange(i, j).expect("validated mode pair"),
            FitTarget::Transition(i, j) => s.transition(i, j),
            FitTarget::TotalNumber => {
                let mut out = FockState::zero(s.modes());
                for k in 0..s.modes() {
                    out = &out + &s.transition(k, k);
                }
                out
            }
            FitTarget::Product(i, j) => params.annihilate(i, &s.create(j)),
        }
    }
}

/// `K12`, `N12`, `N1`, `N`, `A12` with 1-based modes; multi-digit modes may
/// be separated by a comma (`K10,11`).
impl FromStr for FitTarget {
    type Err = OpError;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let bad = || OpError::UnknownTarget(s.to_string());
        let mut chars = s.chars();
        let head = chars.next().ok_or_else(bad)?;
        let rest = chars.as_str();
        let labels: Vec<usize> = if rest.contains(',') {
            rest.split(',').map(|p| p.parse().map_err(|_| bad())).collect::<Result<_, _>>()?
        } else {
            rest.chars()
                .map(|c| c.to_digit(10).map(|d| d as usize).ok_or_else(bad))
                .collect::<Result<_, _>>()?
        };
        if labels.contains(&0) {
            return Err(bad());
        }
        let l: Vec<usize> = labels.iter().map(|x| x - 1).collect();
        match (head, l.as_slice()) {
            ('K', [i, j]) => Ok(FitTarget::Exchange(*i, *j)),
            ('N', [i, j]) => Ok(FitTarget::Transition(*i, *j)),
            ('N', [i]) => Ok(FitTarget::Transition(*i, *i)),
            ('N', []) => Ok(FitTarget::TotalNumber),
            ('A', [i, j]) => Ok(FitTarget::Product(*i, *j)),
            _ => Err(bad()),
        }
    }
}

impl fmt::Display for FitTarget {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let sep = |i: usize, j: usize| if i.max(j) >= 9 { "," } else { "" };
        match *self {
            FitTarget::Exchange(i, j) => write!(f, "K{}{}{}", i + 1, sep(i, j), j + 1),
            FitTarget::Transition(i, j) if i == j => write!(f, "N{}", i + 1),
            FitTarget::Transition(i, j) => write!(f, "N{}{}{}", i + 1, sep(i, j), j + 1),
            FitTarget::TotalNumber => write!(f, "N"),
            FitTarget::Product(i, j) => write!(f, "A{}{}{}", i + 1, sep(i, j), j + 1),
        }
    }
}

impl Serialize for FitTarget {
    fn serialize<S: serde::Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.collect_str(self)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DegreeReport {
    pub degree: usize,
    /// Number of occupation classes; the degree has `classes²` words.
    pub classes: usize,
    pub rank: usize,
    /// Values of ν at which some elimination pivot vanishes.
    pub pivot_roots: Vec<Rat>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct FitOutcome {
    pub target: FitTarget,
    pub degree: usize,
    pub expr: OperatorExpr,
    pub degrees: Vec<DegreeReport>,
    /// Every per-degree Gram matrix had full rank, so the fit reproduces the
    /// target exactly; otherwise only up to null states.
    pub full_rank: bool,
}

/// Whether two states have equal inner products with every monomial, i.e.
/// differ by a null state.
pub fn states_equivalent(params: &AlgebraParams, a: &FockState, b: &FockState, guards: &Guards) -> Result<bool, OpError> {
    let diff = a - b;
    if diff.is_zero() {
        return Ok(true);
    }
    let mut degrees: Vec<usize> = diff.terms().map(|(o, _)| o.degree()).collect();
    degrees.sort_unstable();
    degrees.dedup();
    for d in degrees {
        for bra in occupations_of_degree(params.modes(), d, guards)? {
            if !params.inner_product(&bra.mode_sequence(), &diff).is_zero() {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

fn transpose<F: Clone>(m: &[Vec<F>]) -> Vec<Vec<F>> {
    let cols = m.first().map_or(0, Vec::len);
    (0..cols).map(|c| m.iter().map(|row| row[c].clone()).collect()).collect()
}

fn pivot_roots(pivots: &[NuScalar]) -> Vec<Rat> {
    let mut roots: Vec<Rat> = pivots.iter().flat_map(|p| p.numer().rational_roots()).collect();
    roots.sort();
    roots.dedup();
    roots
}

/// Fits `target` by balanced words of degree `≤ degree`.
pub fn fit_expansion(
    target: FitTarget,
    params: &AlgebraParams,
    degree: usize,
    guards: &Guards,
) -> Result<FitOutcome, OpError> {
    target.validate(params.modes())?;
    let mut expr = OperatorExpr::zero(params.modes());
    let mut degrees = Vec::new();
    let mut full_rank = true;
    for d in 0..=degree {
        let occs = occupations_of_degree(params.modes(), d, guards)?;
        let n = occs.len();
        let position: HashMap<&Occupation, usize> = occs.iter().enumerate().map(|(k, o)| (o, k)).collect();
        let gram = build_gram(params, d, BasisKind::Multiset, guards)?;
        let g: Vec<Vec<NuScalar>> = gram.class_matrix().to_vec();

        // residual[s][c]: coordinate c of target(s) − fit(s)
        let residual: Vec<Vec<NuScalar>> = occs
            .par_iter()
            .map(|o| {
                let s = FockState::monomial(o.clone());
                let r = &target.act(params, &s) - &expr.apply(params, &s);
                let mut row = vec![NuScalar::zero(); n];
                for (occ, c) in r.terms() {
                    let k = *position.get(occ).ok_or_else(|| OpError::Inconsistent {
                        degree: d,
                        detail: format!("residual leaves degree {d}: {occ:?}"),
                    })?;
                    row[k] = c.clone();
                }
                Ok(row)
            })
            .collect::<Result<_, OpError>>()?;

        let structure = linalg::solve(&g, &vec![Vec::new(); n])?;
        let rank = structure.rank();
        degrees.push(DegreeReport {
            degree: d,
            classes: n,
            rank,
            pivot_roots: pivot_roots(&structure.pivots),
        });

        // x[q][c] = X[c][q]
        let x: Vec<Vec<NuScalar>> = if rank == n {
            // X G = R  ⇔  G Xᵀ = Rᵀ, and residual is already Rᵀ.
            linalg::solve(&g, &residual)?.x
        } else {
            full_rank = false;
            let p = &structure.pivot_columns;
            let r = transpose(&residual);
            // (G R)_PP
            let gr: Vec<Vec<NuScalar>> = p
                .iter()
                .map(|&t| {
                    p.iter()
                        .map(|&s| {
                            (0..n)
                                .filter(|&c| !g[t][c].is_zero() && !r[c][s].is_zero())
                                .map(|c| g[t][c].fmul(&r[c][s]))
                                .sum()
                        })
                        .collect()
                })
                .collect();
            let gpp: Vec<Vec<NuScalar>> = p.iter().map(|&a| p.iter().map(|&b| g[a][b].clone()).collect()).collect();
            let z = linalg::solve(&gpp, &gr)?.x;
            let xpp_t = linalg::solve(&gpp, &transpose(&z))?.x;
            let mut x = vec![vec![NuScalar::zero(); n]; n];
            for (qi, &q) in p.iter().enumerate() {
                for (ci, &c) in p.iter().enumerate() {
                    x[q][c] = xpp_t[qi][ci].clone();
                }
            }
            x
        };
        for (q, row) in x.into_iter().enumerate() {
            for (c, v) in row.into_iter().enumerate() {
                expr.add_word(occs[c].clone(), occs[q].clone(), v);
            }
        }
    }

    for (d, report) in degrees.iter().enumerate().take(degree + 1) {
        let occs = occupations_of_degree(params.modes(), d, guards)?;
        let exact = report.rank == report.classes;
        let bad = occs
            .par_iter()
            .map(|o| {
                let s = FockState::monomial(o.clone());
                let (got, want) = (expr.apply(params, &s), target.act(params, &s));
                let ok = if exact { got == want } else { states_equivalent(params, &got, &want, guards)? };
                Ok((!ok).then(|| o.clone()))
            })
            .collect::<Result<Vec<_>, OpError>>()?
            .into_iter()
            .flatten()
            .next();
        if let Some(o) = bad {
            return Err(OpError::Inconsistent {
                degree: d,
                detail: format!("fitted action differs from {target} on {o:?}"),
            });
        }
    }

    Ok(FitOutcome {
        target,
        degree,
        expr,
        degrees,
        full_rank,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::opexpr::{b_block, ModePoly};

    fn occ(v: &[u32]) -> Occupation {
        Occupation::new(v.to_vec())
    }

    fn inv_d() -> NuScalar {
        NuScalar::one().checked_div(&NuScalar::linear(1, 3)).unwrap()
    }

    #[test]
    fn target_names() {
        assert_eq!("K12".parse::<FitTarget>().unwrap(), FitTarget::Exchange(0, 1));
        assert_eq!("N12".parse::<FitTarget>().unwrap(), FitTarget::Transition(0, 1));
        assert_eq!("N3".parse::<FitTarget>().unwrap(), FitTarget::Transition(2, 2));
        assert_eq!("N".parse::<FitTarget>().unwrap(), FitTarget::TotalNumber);
        assert_eq!("A21".parse::<FitTarget>().unwrap(), FitTarget::Product(1, 0));
        assert_eq!("K10,11".parse::<FitTarget>().unwrap(), FitTarget::Exchange(9, 10));
        for bad in ["", "X12", "K1", "K0", "K1a"] {
            assert!(bad.parse::<FitTarget>().is_err(), "{bad}");
        }
        for t in ["K12", "N1", "N", "A32", "N10,2"] {
            assert_eq!(t.parse::<FitTarget>().unwrap().to_string(), t);
        }
        assert!(FitTarget::Exchange(0, 0).validate(3).is_err());
        assert!(FitTarget::Exchange(0, 3).validate(3).is_err());
    }

    #[test]
    fn exchange_degree_one_is_unique() {
        let p = AlgebraParams::symbolic(3).unwrap();
        let fit = fit_expansion(FitTarget::Exchange(0, 1), &p, 1, &Guards::default()).unwrap();
        assert!(fit.full_rank);
        assert_eq!(fit.degrees[1].classes, 3);
        assert!(fit.degrees[1].pivot_roots.contains(&Rat::new(-1, 3)));
        // 1 − b12† b12 / (1 + 3ν)
        let b12 = ModePoly::linear(3, &[1, -1, 0]);
        let expect = &OperatorExpr::identity(3) - &OperatorExpr::normal_product(&b12, &b12).scale(&inv_d());
        assert_eq!(fit.expr, expect);
    }

    #[test]
    fn total_number_degree_one() {
        let p = AlgebraParams::symbolic(3).unwrap();
        let fit = fit_expansion(FitTarget::TotalNumber, &p, 1, &Guards::default()).unwrap();
        let b01 = ModePoly::linear(3, &[1, 1, 1]);
        let expect = &b_block(1, 1, 3).scale(&inv_d())
            + &OperatorExpr::normal_product(&b01, &b01).scale(&(&NuScalar::nu() * &inv_d()));
        assert_eq!(fit.expr, expect);
        let free = fit_expansion(FitTarget::TotalNumber, &p.at_value(Rat::zero()), 1, &Guards::default()).unwrap();
        assert_eq!(free.expr, b_block(1, 1, 3));
    }

    #[test]
    fn singular_coupling_fits_up_to_null_states() {
        let p = AlgebraParams::at(3, Rat::new(-1, 3)).unwrap();
        let fit = fit_expansion(FitTarget::TotalNumber, &p, 1, &Guards::default()).unwrap();
        assert!(!fit.full_rank);
        assert_eq!(fit.degrees[1].rank, 1);
        let b01 = ModePoly::linear(3, &[1, 1, 1]);
        let third = OperatorExpr::normal_product(&b01, &b01).scale(&NuScalar::from_rat(Rat::new(1, 3)));
        for o in [occ(&[1, 0, 0]), occ(&[0, 1, 0]), occ(&[0, 0, 1])] {
            let s = FockState::monomial(o);
            let g = Guards::default();
            assert!(states_equivalent(&p, &fit.expr.apply(&p, &s), &third.apply(&p, &s), &g).unwrap());
        }
        // The first pivot class carries the whole weight.
        assert_eq!(fit.expr.coefficient(&occ(&[1, 0, 0]), &occ(&[1, 0, 0])), NuScalar::from_int(3));
        assert_eq!(fit.expr.len(), 1);
    }

    #[test]
    fn transition_and_product_fit() {
        let p = AlgebraParams::symbolic(2).unwrap();
        let g = Guards::default();
        for t in [FitTarget::Transition(0, 1), FitTarget::Product(0, 1), FitTarget::Product(1, 1)] {
            let fit = fit_expansion(t, &p, 2, &g).unwrap();
            assert!(fit.full_rank);
            for o in occupations_of_degree(2, 2, &g).unwrap() {
                let s = FockState::monomial(o);
                assert_eq!(fit.expr.apply(&p, &s), t.act(&p, &s));
            }
        }
    }
}
