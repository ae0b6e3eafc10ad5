//! Operator identities of the algebra, checked as equalities of actions on
//! every monomial of bounded degree.

use std::fmt;
use std::str::FromStr;

use rayon::prelude::*;
use serde::Serialize;

use super::OpError;
use crate::fock::{occupations_up_to, AlgebraParams, Coupling, FockState, Guards, Occupation};
use crate::scalar::{NuScalar, Rat};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Relation {
    /// `[N_ij, a_k†] = δ_jk a_i†`, `[N_ij, N_kl] = δ_jk N_il − δ_il N_kj`.
    NumberOperators,
    /// `K_ij² = 1`, `K_ij = K_ji`, the braid relation and the covariance of
    /// `a_k`, `a_k†` under `K_ij`.
    ExchangeGroup,
    /// `K_ij = N_ji^{n_i} N_ij^{n_j} / (n_i+n_j)!` on a monomial with
    /// occupations `n_i`, `n_j`.
    ExchangeFromTransitions,
    /// `[a_i, a_j] = 0` and `[a_i, a_j†] = (1 + ν Σ_{k≠i} K_ik) δ_ij − ν K_ij`.
    Heisenberg,
    /// The exchange-free presentation through `C_ij = [a_i, a_j†]`.
    TripleAlgebra,
    /// `a_i|0⟩ = 0`, `a_i a_j†|0⟩ = −ν|0⟩`, `K_ij|0⟩ = |0⟩`.
    Vacuum,
    /// `C_ij² = ν²`, `[a_k, C_ij²] = 0`, `C_ij C_jk = C_jk C_ik = C_ik C_ij`.
    CommutatorConsistency,
    /// `a_i a_j† = −ν K_ij + a_j† a_i` and `a_i a_i† = 1 + a_i† a_i + ν Σ_{l≠i} K_il`.
    NormalOrdering,
    /// `[ã_i, a_j†] = δ_ij`, `[ã_i, ã_j] = 0`.
    DualPair,
    /// `½ Σ_i {a_i, a_i†} = N + E_0`.
    Hamiltonian,
    /// `[a_i, a_j] = 0` and `[N_i, a_j†] = δ_ij a_j†`, with `1 + Mν > 0` reported.
    MappingPreconditions,
}

impl Relation {
    pub const ALL: [Relation; 11] = [
        Relation::NumberOperators,
        Relation::ExchangeGroup,
        Relation::ExchangeFromTransitions,
        Relation::Heisenberg,
        Relation::TripleAlgebra,
        Relation::Vacuum,
        Relation::CommutatorConsistency,
        Relation::NormalOrdering,
        Relation::DualPair,
        Relation::Hamiltonian,
        Relation::MappingPreconditions,
    ];

    pub fn id(&self) -> &'static str {
        match self {
            Relation::NumberOperators => "number-operators",
            Relation::ExchangeGroup => "exchange-group",
            Relation::ExchangeFromTransitions => "exchange-from-transitions",
            Relation::Heisenberg => "heisenberg",
            Relation::TripleAlgebra => "triple-algebra",
            Relation::Vacuum => "vacuum",
            Relation::CommutatorConsistency => "commutator-consistency",
            Relation::NormalOrdering => "normal-ordering",
            Relation::DualPair => "dual-pair",
            Relation::Hamiltonian => "hamiltonian",
            Relation::MappingPreconditions => "mapping-preconditions",
        }
    }

    /// Parses `all` or a comma-separated list of ids.
    pub fn parse_list(s: &str) -> Result<Vec<Relation>, OpError> {
        if s.trim() == "all" {
            return Ok(Relation::ALL.to_vec());
        }
        let mut out: Vec<Relation> = s
            .split(',')
            .map(|t| t.trim().parse())
            .collect::<Result<_, _>>()?;
        out.sort();
        out.dedup();
        Ok(out)
    }
}

impl FromStr for Relation {
    type Err = OpError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Relation::ALL
            .iter()
            .copied()
            .find(|r| r.id() == s)
            .ok_or_else(|| OpError::UnknownRelation(s.to_string()))
    }
}

impl fmt::Display for Relation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.id())
    }
}

impl Serialize for Relation {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(self.id())
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Counterexample {
    /// The identity instance, with 1-based mode labels.
    pub check: String,
    pub state: Occupation,
    pub lhs: FockState,
    pub rhs: FockState,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RelationReport {
    pub relation: Relation,
    pub modes: usize,
    pub degree: usize,
    pub nu: Coupling,
    pub states_checked: usize,
    pub instances_checked: usize,
    pub passed: bool,
    /// Only for `mapping-preconditions`; `None` at symbolic ν.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub positivity: Option<bool>,
    pub counterexample: Option<Counterexample>,
}

type Side = Box<dyn Fn(&FockState) -> (FockState, FockState) + Send + Sync>;

struct Check {
    name: String,
    sides: Side,
}

fn check(name: String, sides: impl Fn(&FockState) -> (FockState, FockState) + Send + Sync + 'static) -> Check {
    Check {
        name,
        sides: Box::new(sides),
    }
}

fn delta(i: usize, j: usize) -> bool {
    i == j
}

fn ordered_pairs(m: usize) -> impl Iterator<Item = (usize, usize)> {
    (0..m).flat_map(move |i| (0..m).filter(move |&j| j != i).map(move |j| (i, j)))
}

fn distinct_triples(m: usize) -> impl Iterator<Item = (usize, usize, usize)> {
    ordered_pairs(m).flat_map(move |(i, j)| (0..m).filter(move |&k| k != i && k != j).map(move |k| (i, j, k)))
}

/// `C_ij s = a_i a_j† s − a_j† a_i s`, computed from the annihilation rule.
fn c_action(p: &AlgebraParams, i: usize, j: usize, s: &FockState) -> FockState {
    &p.annihilate(i, &s.create(j)) - &p.annihilate(i, s).create(j)
}

fn exch(s: &FockState, i: usize, j: usize) -> FockState {
    s.exchange(i, j).expect("distinct modes in range")
}

fn checks_for(rel: Relation, p: &AlgebraParams) -> Vec<Check> {
    let m = p.modes();
    let mut out = Vec::new();
    match rel {
        Relation::NumberOperators => {
            for i in 0..m {
                for j in 0..m {
                    for k in 0..m {
                        out.push(check(format!("[N{}{}, a{}+] = δ a{}+", i + 1, j + 1, k + 1, i + 1), move |s| {
                            let lhs = &s.create(k).transition(i, j) - &s.transition(i, j).create(k);
                            let rhs = if delta(j, k) { s.create(i) } else { FockState::zero(s.modes()) };
                            (lhs, rhs)
                        }));
                        for l in 0..m {
                            out.push(check(
                                format!("[N{}{}, N{}{}]", i + 1, j + 1, k + 1, l + 1),
                                move |s| {
                                    let lhs = &s.transition(k, l).transition(i, j) - &s.transition(i, j).transition(k, l);
                                    let mut rhs = FockState::zero(s.modes());
                                    if delta(j, k) {
                                        rhs = &rhs + &s.transition(i, l);
                                    }
                                    if delta(i, l) {
                                        rhs = &rhs - &s.transition(k, j);
                                    }
                                    (lhs, rhs)
                                },
                            ));
                        }
                    }
                }
            }
        }
        Relation::ExchangeGroup => {
            for (i, j) in ordered_pairs(m) {
                out.push(check(format!("K{}{}^2 = 1", i + 1, j + 1), move |s| {
                    (exch(&exch(s, i, j), i, j), s.clone())
                }));
                out.push(check(format!("K{}{} = K{}{}", i + 1, j + 1, j + 1, i + 1), move |s| {
                    (exch(s, i, j), exch(s, j, i))
                }));
                let pa = p.clone();
                out.push(check(format!("K{}{} a{} = a{} K{}{}", i + 1, j + 1, j + 1, i + 1, i + 1, j + 1), move |s| {
                    (exch(&pa.annihilate(j, s), i, j), pa.annihilate(i, &exch(s, i, j)))
                }));
                out.push(check(format!("K{}{} a{}+ = a{}+ K{}{}", i + 1, j + 1, j + 1, i + 1, i + 1, j + 1), move |s| {
                    (exch(&s.create(j), i, j), exch(s, i, j).create(i))
                }));
                for k in (0..m).filter(|&k| k != i && k != j) {
                    let pa = p.clone();
                    out.push(check(format!("K{}{} a{} = a{} K{}{}", i + 1, j + 1, k + 1, k + 1, i + 1, j + 1), move |s| {
                        (exch(&pa.annihilate(k, s), i, j), pa.annihilate(k, &exch(s, i, j)))
                    }));
                    out.push(check(format!("K{}{} a{}+ = a{}+ K{}{}", i + 1, j + 1, k + 1, k + 1, i + 1, j + 1), move |s| {
                        (exch(&s.create(k), i, j), exch(s, i, j).create(k))
                    }));
                }
            }
            for (i, j, l) in distinct_triples(m) {
                out.push(check(
                    format!("K{a}{b} K{b}{c} = K{b}{c} K{a}{c}", a = i + 1, b = j + 1, c = l + 1),
                    move |s| (exch(&exch(s, j, l), i, j), exch(&exch(s, i, l), j, l)),
                ));
                out.push(check(
                    format!("K{b}{c} K{a}{c} = K{a}{c} K{a}{b}", a = i + 1, b = j + 1, c = l + 1),
                    move |s| (exch(&exch(s, i, l), j, l), exch(&exch(s, i, j), i, l)),
                ));
            }
        }
        Relation::ExchangeFromTransitions => {
            for (i, j) in ordered_pairs(m).filter(|&(i, j)| i < j) {
                out.push(check(format!("K{a}{b} = N{b}{a}^ni N{a}{b}^nj / (ni+nj)!", a = i + 1, b = j + 1), move |s| {
                    let mut lhs = FockState::zero(s.modes());
                    for (occ, c) in s.terms() {
                        let (ni, nj) = (occ.count(i), occ.count(j));
                        let mut t = FockState::monomial(occ.clone()).scale(c);
                        for _ in 0..nj {
                            t = t.transition(i, j);
                        }
                        for _ in 0..ni {
                            t = t.transition(j, i);
                        }
                        let fact: Rat = (1..=(ni + nj) as i64).map(Rat::from).product();
                        lhs = &lhs + &t.scale_rat(&fact.recip().expect("nonzero factorial"));
                    }
                    (lhs, exch(s, i, j))
                }));
            }
        }
        Relation::Heisenberg => {
            for i in 0..m {
                for j in 0..m {
                    let pa = p.clone();
                    out.push(check(format!("[a{}, a{}] = 0", i + 1, j + 1), move |s| {
                        (pa.annihilate(i, &pa.annihilate(j, s)), pa.annihilate(j, &pa.annihilate(i, s)))
                    }));
                    let pa = p.clone();
                    out.push(check(format!("[a{}, a{}+] = A{}{}", i + 1, j + 1, i + 1, j + 1), move |s| {
                        (c_action(&pa, i, j, s), pa.commutator_action(i, j, s))
                    }));
                }
            }
        }
        Relation::TripleAlgebra => {
            for i in 0..m {
                let pa = p.clone();
                out.push(check(format!("[a{}, B01+] = 1", i + 1), move |s| {
                    let mut lhs = FockState::zero(s.modes());
                    for k in 0..s.modes() {
                        lhs = &lhs + &c_action(&pa, i, k, s);
                    }
                    (lhs, s.clone())
                }));
            }
            for (i, j) in ordered_pairs(m) {
                let pa = p.clone();
                out.push(check(format!("a{a} C{a}{b} = C{a}{b} a{b}", a = i + 1, b = j + 1), move |s| {
                    (pa.annihilate(i, &c_action(&pa, i, j, s)), c_action(&pa, i, j, &pa.annihilate(j, s)))
                }));
                let pa = p.clone();
                out.push(check(format!("a{a} C{b}{a} = C{b}{a} a{b}", a = i + 1, b = j + 1), move |s| {
                    (pa.annihilate(i, &c_action(&pa, j, i, s)), c_action(&pa, j, i, &pa.annihilate(j, s)))
                }));
                let pa = p.clone();
                out.push(check(format!("C{b}{a} a{a}+ = a{b}+ C{b}{a}", a = i + 1, b = j + 1), move |s| {
                    (c_action(&pa, j, i, &s.create(i)), c_action(&pa, j, i, s).create(j))
                }));
                let pa = p.clone();
                out.push(check(format!("C{a}{b} a{a}+ = a{b}+ C{a}{b}", a = i + 1, b = j + 1), move |s| {
                    (c_action(&pa, i, j, &s.create(i)), c_action(&pa, i, j, s).create(j))
                }));
                let pa = p.clone();
                out.push(check(format!("C{a}{b} = C{b}{a}", a = i + 1, b = j + 1), move |s| {
                    (c_action(&pa, i, j, s), c_action(&pa, j, i, s))
                }));
            }
            for (i, j, k) in distinct_triples(m) {
                let pa = p.clone();
                out.push(check(format!("a{c} C{a}{b} = C{a}{b} a{c}", a = i + 1, b = j + 1, c = k + 1), move |s| {
                    (pa.annihilate(k, &c_action(&pa, i, j, s)), c_action(&pa, i, j, &pa.annihilate(k, s)))
                }));
                let pa = p.clone();
                out.push(check(format!("C{a}{b} a{c}+ = a{c}+ C{a}{b}", a = i + 1, b = j + 1, c = k + 1), move |s| {
                    (c_action(&pa, i, j, &s.create(k)), c_action(&pa, i, j, s).create(k))
                }));
            }
        }
        Relation::Vacuum => {
            let nu = p.nu().clone();
            for i in 0..m {
                let pa = p.clone();
                out.push(check(format!("a{}|0> = 0", i + 1), move |s| {
                    (pa.annihilate(i, s), FockState::zero(s.modes()))
                }));
            }
            for (i, j) in ordered_pairs(m) {
                let pa = p.clone();
                let nu = nu.clone();
                out.push(check(format!("a{}a{}+|0> = -nu|0>", i + 1, j + 1), move |s| {
                    (pa.annihilate(i, &s.create(j)), s.scale(&-&nu))
                }));
                out.push(check(format!("K{}{}|0> = |0>", i + 1, j + 1), move |s| (exch(s, i, j), s.clone())));
            }
        }
        Relation::CommutatorConsistency => {
            let nu2 = p.nu().pow(2);
            for (i, j) in ordered_pairs(m) {
                let pa = p.clone();
                let nu2 = nu2.clone();
                out.push(check(format!("C{a}{b}^2 = nu^2", a = i + 1, b = j + 1), move |s| {
                    (c_action(&pa, i, j, &c_action(&pa, i, j, s)), s.scale(&nu2))
                }));
                for k in 0..m {
                    let pa = p.clone();
                    out.push(check(format!("[a{c}, C{a}{b}^2] = 0", a = i + 1, b = j + 1, c = k + 1), move |s| {
                        let sq = |t: &FockState| c_action(&pa, i, j, &c_action(&pa, i, j, t));
                        (pa.annihilate(k, &sq(s)), sq(&pa.annihilate(k, s)))
                    }));
                }
            }
            for (i, j, k) in distinct_triples(m) {
                let pa = p.clone();
                out.push(check(
                    format!("C{a}{b} C{b}{c} = C{b}{c} C{a}{c}", a = i + 1, b = j + 1, c = k + 1),
                    move |s| {
                        (
                            c_action(&pa, i, j, &c_action(&pa, j, k, s)),
                            c_action(&pa, j, k, &c_action(&pa, i, k, s)),
                        )
                    },
                ));
                let pa = p.clone();
                out.push(check(
                    format!("C{b}{c} C{a}{c} = C{a}{c} C{a}{b}", a = i + 1, b = j + 1, c = k + 1),
                    move |s| {
                        (
                            c_action(&pa, j, k, &c_action(&pa, i, k, s)),
                            c_action(&pa, i, k, &c_action(&pa, i, j, s)),
                        )
                    },
                ));
            }
        }
        Relation::NormalOrdering => {
            let nu = p.nu().clone();
            for i in 0..m {
                for j in 0..m {
                    let pa = p.clone();
                    let nu = nu.clone();
                    out.push(check(format!("a{}a{}+ normal order", i + 1, j + 1), move |s| {
                        let lhs = pa.annihilate(i, &s.create(j));
                        let mut rhs = pa.annihilate(i, s).create(j);
                        if i == j {
                            rhs = &rhs + s;
                            for l in (0..s.modes()).filter(|&l| l != i) {
                                rhs = &rhs + &exch(s, i, l).scale(&nu);
                            }
                        } else {
                            rhs = &rhs - &exch(s, i, j).scale(&nu);
                        }
                        (lhs, rhs)
                    }));
                }
            }
        }
        Relation::DualPair => {
            for i in 0..m {
                for j in 0..m {
                    out.push(check(format!("[~a{}, a{}+] = δ", i + 1, j + 1), move |s| {
                        let lhs = &s.create(j).dual_annihilate(i) - &s.dual_annihilate(i).create(j);
                        (lhs, if i == j { s.clone() } else { FockState::zero(s.modes()) })
                    }));
                    out.push(check(format!("[~a{}, ~a{}] = 0", i + 1, j + 1), move |s| {
                        (s.dual_annihilate(j).dual_annihilate(i), s.dual_annihilate(i).dual_annihilate(j))
                    }));
                }
            }
        }
        Relation::Hamiltonian => {
            let pa = p.clone();
            let e0 = p.ground_energy();
            out.push(check("1/2 Σ {a_i, a_i+} = N + E0".into(), move |s| {
                let mut lhs = FockState::zero(s.modes());
                for i in 0..s.modes() {
                    lhs = &lhs + &pa.annihilate(i, &s.create(i));
                    lhs = &lhs + &pa.annihilate(i, s).create(i);
                }
                let lhs = lhs.scale_rat(&Rat::new(1, 2));
                let mut rhs = FockState::zero(s.modes());
                for (occ, c) in s.terms() {
                    let energy = &NuScalar::from_int(occ.degree() as i64) + &e0;
                    rhs.add_term(occ.clone(), c * &energy);
                }
                (lhs, rhs)
            }));
        }
        Relation::MappingPreconditions => {
            for i in 0..m {
                for j in 0..m {
                    let pa = p.clone();
                    out.push(check(format!("[a{}, a{}] = 0", i + 1, j + 1), move |s| {
                        (pa.annihilate(i, &pa.annihilate(j, s)), pa.annihilate(j, &pa.annihilate(i, s)))
                    }));
                    out.push(check(format!("[N{}, a{}+] = δ a{}+", i + 1, j + 1, j + 1), move |s| {
                        let lhs = &s.create(j).transition(i, i) - &s.transition(i, i).create(j);
                        (lhs, if i == j { s.create(j) } else { FockState::zero(s.modes()) })
                    }));
                }
            }
        }
    }
    out
}

fn first_failure(checks: &[Check], states: &[Occupation]) -> Option<Counterexample> {
    let failures: Vec<Option<Counterexample>> = states
        .par_iter()
        .map(|occ| {
            let s = FockState::monomial(occ.clone());
            checks.iter().find_map(|c| {
                let (lhs, rhs) = (c.sides)(&s);
                (lhs != rhs).then(|| Counterexample {
                    check: c.name.clone(),
                    state: occ.clone(),
                    lhs,
                    rhs,
                })
            })
        })
        .collect();
    failures.into_iter().flatten().next()
}

/// Checks `rel` on every monomial of degree `≤ degree` (only the vacuum for
/// [`Relation::Vacuum`]). The reported counterexample is the first failure
/// in (state, instance) order.
pub fn verify_relation(
    rel: Relation,
    params: &AlgebraParams,
    degree: usize,
    guards: &Guards,
) -> Result<RelationReport, OpError> {
    let states = if rel == Relation::Vacuum {
        vec![Occupation::vacuum(params.modes())]
    } else {
        occupations_up_to(params.modes(), degree, guards)?
    };
    let checks = checks_for(rel, params);
    let counterexample = first_failure(&checks, &states);
    Ok(RelationReport {
        relation: rel,
        modes: params.modes(),
        degree,
        nu: params.coupling().clone(),
        states_checked: states.len(),
        instances_checked: states.len() * checks.len(),
        passed: counterexample.is_none(),
        positivity: if rel == Relation::MappingPreconditions {
            params.positivity()
        } else {
            None
        },
        counterexample,
    })
}
