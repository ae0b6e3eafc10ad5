//! Closed-form truncated expansions for three modes, and the normally ordered
//! exponential that exchanges two free-boson modes.
//!
//! With `D = 1+3ν`, `E = 2+3ν`, `b_12 = a_1 − a_2`, `b_123 = a_1 + a_2 − 2a_3`,
//! `b_23 = a_2 − a_3`, `b_231 = a_2 + a_3 − 2a_1`:
//!
//! ```text
//! K_12 = 1 − b_12†b_12/D + b_12†²b_12²/(2D²) − ν/(2D²E) b_12†b_123†b_12 b_123 + ⋯
//! N_1  = a_1†a_1/D + ν/D a_1†B_01 − ν/(4DE) a_1†b_231†b_23²
//!        − ν(1+ν)/(4D²E) a_1†b_231†b_231² − ν/(2D²E) a_1†b_23†b_23 b_231 + ⋯
//! N    = B_11/D + ν/D B_01†B_01 + ν/(D²E) Σ_{i<j} (a_i†−a_j†)²(a_i−a_j)²
//!        + 2ν²/(D²E) S†S,   S = Σ a_i² − Σ_{i<j} a_i a_j
//! ```
//!
//! The displayed terms fix the action on states of degree ≤ 2. The total
//! number also has a block form, kept separately so both can be checked.

use super::fit::FitTarget;
use super::{b_block, ModePoly, OperatorExpr};
use crate::scalar::{NuScalar, Rat};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum ReferenceExpansion {
    /// `K_12` for three modes.
    ExchangeM3,
    /// `N_1` for three modes.
    PartialNumberM3,
    /// `N` for three modes, sum form.
    TotalNumberM3,
    /// `N` for three modes written with `B_{m,n}` blocks.
    TotalNumberBlocksM3,
    /// `:exp(−(b_i†−b_j†)(b_i−b_j)):` truncated at `degree`; a free-boson
    /// identity (ν = 0).
    BosonExchange {
        modes: usize,
        i: usize,
        j: usize,
        degree: u32,
    },
}

fn ratio(num: NuScalar, den: NuScalar) -> NuScalar {
    num.checked_div(&den).expect("nonzero polynomial denominator")
}

impl ReferenceExpansion {
    pub fn modes(&self) -> usize {
        match self {
            ReferenceExpansion::BosonExchange { modes, .. } => *modes,
            _ => 3,
        }
    }

    pub fn name(&self) -> String {
        match self {
            ReferenceExpansion::ExchangeM3 => "K12-M3".into(),
            ReferenceExpansion::PartialNumberM3 => "N1-M3".into(),
            ReferenceExpansion::TotalNumberM3 => "N-M3".into(),
            ReferenceExpansion::TotalNumberBlocksM3 => "N-M3-blocks".into(),
            ReferenceExpansion::BosonExchange { i, j, degree, .. } => {
                format!("boson-exchange-{}{}-D{degree}", i + 1, j + 1)
            }
        }
    }

    /// The operator the expansion represents.
    pub fn target(&self) -> FitTarget {
        match *self {
            ReferenceExpansion::ExchangeM3 => FitTarget::Exchange(0, 1),
            ReferenceExpansion::PartialNumberM3 => FitTarget::Transition(0, 0),
            ReferenceExpansion::TotalNumberM3 | ReferenceExpansion::TotalNumberBlocksM3 => {
                FitTarget::TotalNumber
            }
            ReferenceExpansion::BosonExchange { i, j, .. } => FitTarget::Exchange(i, j),
        }
    }

    /// Highest state degree on which the truncation is complete.
    pub fn exact_degree(&self) -> usize {
        match self {
            ReferenceExpansion::BosonExchange { degree, .. } => *degree as usize,
            _ => 2,
        }
    }

    pub fn expr(&self) -> OperatorExpr {
        let nu = NuScalar::nu();
        let d = NuScalar::linear(1, 3);
        let e = NuScalar::linear(2, 3);
        let d2e = &(&d * &d) * &e;
        let x = |k: usize| ModePoly::variable(3, k);
        let lin = |w: &[i64]| ModePoly::linear(3, w);
        let np = OperatorExpr::normal_product;
        match *self {
            ReferenceExpansion::ExchangeM3 => {
                let b12 = lin(&[1, -1, 0]);
                let b123 = lin(&[1, 1, -2]);
                let b12b123 = &b12 * &b123;
                let terms = [
                    OperatorExpr::identity(3),
                    np(&b12, &b12).scale(&ratio(NuScalar::from_int(-1), d.clone())),
                    np(&b12.pow(2), &b12.pow(2))
                        .scale(&ratio(NuScalar::one(), (&d * &d).scale(&Rat::from(2)))),
                    np(&b12b123, &b12b123).scale(&ratio(-&nu, d2e.scale(&Rat::from(2)))),
                ];
                terms.iter().fold(OperatorExpr::zero(3), |acc, t| &acc + t)
            }
            ReferenceExpansion::PartialNumberM3 => {
                let b23 = lin(&[0, 1, -1]);
                let b231 = lin(&[-2, 1, 1]);
                let a1 = x(0);
                let b01 = lin(&[1, 1, 1]);
                let terms = [
                    np(&a1, &a1).scale(&ratio(NuScalar::one(), d.clone())),
                    np(&a1, &b01).scale(&ratio(nu.clone(), d.clone())),
                    np(&(&a1 * &b231), &b23.pow(2))
                        .scale(&ratio(-&nu, (&d * &e).scale(&Rat::from(4)))),
                    np(&(&a1 * &b231), &b231.pow(2)).scale(&ratio(
                        -&(&nu * &NuScalar::linear(1, 1)),
                        d2e.scale(&Rat::from(4)),
                    )),
                    np(&(&a1 * &b23), &(&b23 * &b231))
                        .scale(&ratio(-&nu, d2e.scale(&Rat::from(2)))),
                ];
                terms.iter().fold(OperatorExpr::zero(3), |acc, t| &acc + t)
            }
            ReferenceExpansion::TotalNumberM3 => {
                let b01 = lin(&[1, 1, 1]);
                let mut out = &b_block(1, 1, 3).scale(&ratio(NuScalar::one(), d.clone()))
                    + &np(&b01, &b01).scale(&ratio(nu.clone(), d.clone()));
                let pair_coef = ratio(nu.clone(), d2e.clone());
                for i in 0..3 {
                    for j in i + 1..3 {
                        let diff = (&x(i) - &x(j)).pow(2);
                        out = &out + &np(&diff, &diff).scale(&pair_coef);
                    }
                }
                let mut s = ModePoly::power_sum(3, 2);
                for i in 0..3 {
                    for j in i + 1..3 {
                        s = &s - &(&x(i) * &x(j));
                    }
                }
                &out + &np(&s, &s).scale(&ratio(nu.pow(2).scale(&Rat::from(2)), d2e))
            }
            ReferenceExpansion::TotalNumberBlocksM3 => {
                let b01 = lin(&[1, 1, 1]);
                let p2 = ModePoly::power_sum(3, 2);
                let xx = &p2.scale(&NuScalar::from_rat(Rat::new(3, 2)))
                    - &b01.pow(2).scale(&NuScalar::from_rat(Rat::new(1, 2)));
                let mut inner = &np(&xx, &xx).scale(&nu.scale(&Rat::from(2)))
                    + &b_block(2, 2, 3).scale(&NuScalar::from_int(3));
                inner = &inner + &np(&p2, &p2);
                for k in 0..3 {
                    // B_21 B_01 + B_01† B_12
                    let b21b01 = np(&x(k).pow(2), &(&x(k) * &b01));
                    let b01b12 = np(&(&b01 * &x(k)), &x(k).pow(2));
                    inner = &inner - &(&b21b01 + &b01b12).scale(&NuScalar::from_int(2));
                    for i in 0..3 {
                        let xi_xk = &x(i) * &x(k);
                        inner = &inner + &np(&xi_xk, &xi_xk).scale(&NuScalar::from_int(2));
                    }
                }
                let lead = &b_block(1, 1, 3).scale(&ratio(NuScalar::one(), d.clone()))
                    + &np(&b01, &b01).scale(&ratio(nu.clone(), d));
                &lead + &inner.scale(&ratio(nu, d2e))
            }
            ReferenceExpansion::BosonExchange {
                modes,
                i,
                j,
                degree,
            } => {
                let mut w = vec![0i64; modes];
                w[i] += 1;
                w[j] -= 1;
                let b = ModePoly::linear(modes, &w);
                let mut out = OperatorExpr::zero(modes);
                let mut factorial = Rat::one();
                for k in 0..=degree {
                    if k > 0 {
                        factorial *= &Rat::from(k as i64);
                    }
                    let sign = if k % 2 == 0 { Rat::one() } else { Rat::from(-1) };
                    let coef = NuScalar::from_rat(&sign / &factorial);
                    out = &out + &np(&b.pow(k), &b.pow(k)).scale(&coef);
                }
                out
            }
        }
    }
}
