//! Normally ordered operator expressions: sums of words
//! `c · Π_k (a_k†)^{p_k} Π_k a_k^{q_k}` with every creation to the left of
//! every annihilation. Since creations commute among themselves and so do
//! annihilations, a word is keyed by the pair of occupation vectors `(p, q)`.

mod fit;
mod reference;
mod relations;

pub use fit::{fit_expansion, states_equivalent, DegreeReport, FitOutcome, FitTarget};
pub use reference::ReferenceExpansion;
pub use relations::{verify_relation, Counterexample, Relation, RelationReport};

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::fock::{AlgebraParams, FockError, FockState, Occupation};
use crate::gram::GramError;
use crate::linalg::LinalgError;
use crate::scalar::{NuPoly, NuScalar, Rat, ScalarError};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum OpError {
    #[error(transparent)]
    Fock(#[from] FockError),
    #[error(transparent)]
    Gram(#[from] GramError),
    #[error("coefficient {coefficient} of a word is singular at nu = {at}")]
    ZeroPivot { coefficient: Box<NuScalar>, denominator: NuPoly, at: Rat },
    #[error("fit does not reproduce the target at degree {degree}: {detail}")]
    Inconsistent { degree: usize, detail: String },
    #[error("unknown relation {0:?}")]
    UnknownRelation(String),
    #[error("unknown fit target {0:?}")]
    UnknownTarget(String),
    #[error("{0} needs {1} modes")]
    WrongModes(String, usize),
    #[error("expression has {found} modes, expected {expected}")]
    ModeMismatch { expected: usize, found: usize },
    #[error(transparent)]
    Linalg(#[from] LinalgError),
}

/// Polynomial in `M` commuting variables; used for the creation side
/// (variables `a_k†`) or the annihilation side (variables `a_k`) of a word.
#[derive(Clone, PartialEq, Eq)]
pub struct ModePoly {
    modes: usize,
    terms: BTreeMap<Occupation, NuScalar>,
}

impl ModePoly {
    pub fn zero(modes: usize) -> Self {
        ModePoly {
            modes,
            terms: BTreeMap::new(),
        }
    }

    pub fn constant(modes: usize, c: NuScalar) -> Self {
        let mut p = Self::zero(modes);
        p.add_term(Occupation::vacuum(modes), c);
        p
    }

    pub fn one(modes: usize) -> Self {
        Self::constant(modes, NuScalar::one())
    }

    /// `Σ_k w_k x_k`.
    pub fn linear(modes: usize, weights: &[i64]) -> Self {
        assert_eq!(weights.len(), modes);
        let mut p = Self::zero(modes);
        for (k, &w) in weights.iter().enumerate() {
            p.add_term(Occupation::unit(modes, k), NuScalar::from_int(w));
        }
        p
    }

    pub fn variable(modes: usize, k: usize) -> Self {
        Self::monomial(Occupation::unit(modes, k))
    }

    pub fn monomial(occ: Occupation) -> Self {
        let mut p = Self::zero(occ.modes());
        p.add_term(occ, NuScalar::one());
        p
    }

    /// `Σ_k x_k^power`.
    pub fn power_sum(modes: usize, power: u32) -> Self {
        let mut p = Self::zero(modes);
        for k in 0..modes {
            let mut v = vec![0; modes];
            v[k] = power;
            p.add_term(Occupation::new(v), NuScalar::one());
        }
        p
    }

    pub fn modes(&self) -> usize {
        self.modes
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Occupation, &NuScalar)> {
        self.terms.iter()
    }

    pub fn add_term(&mut self, occ: Occupation, coef: NuScalar) {
        if coef.is_zero() {
            return;
        }
        let entry = self.terms.entry(occ).or_default();
        *entry += &coef;
        if entry.is_zero() {
            self.terms.retain(|_, c| !c.is_zero());
        }
    }

    pub fn scale(&self, c: &NuScalar) -> ModePoly {
        let mut p = Self::zero(self.modes);
        for (o, v) in &self.terms {
            p.add_term(o.clone(), v * c);
        }
        p
    }

    pub fn pow(&self, exp: u32) -> ModePoly {
        (0..exp).fold(Self::one(self.modes), |acc, _| &acc * self)
    }
}

impl Add for &ModePoly {
    type Output = ModePoly;
    fn add(self, rhs: &ModePoly) -> ModePoly {
        let mut p = self.clone();
        for (o, v) in &rhs.terms {
            p.add_term(o.clone(), v.clone());
        }
        p
    }
}

impl Sub for &ModePoly {
    type Output = ModePoly;
    fn sub(self, rhs: &ModePoly) -> ModePoly {
        let mut p = self.clone();
        for (o, v) in &rhs.terms {
            p.add_term(o.clone(), -v);
        }
        p
    }
}

impl Mul for &ModePoly {
    type Output = ModePoly;
    fn mul(self, rhs: &ModePoly) -> ModePoly {
        let mut p = ModePoly::zero(self.modes);
        for (o1, v1) in &self.terms {
            for (o2, v2) in &rhs.terms {
                p.add_term(o1.plus(o2), v1 * v2);
            }
        }
        p
    }
}

impl fmt::Debug for ModePoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_map().entries(self.terms.iter()).finish()
    }
}

/// One normally ordered word.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct OperatorWord {
    pub create: Occupation,
    pub annihilate: Occupation,
    pub coef: NuScalar,
}

impl OperatorWord {
    /// Common degree if creation and annihilation degrees agree.
    pub fn balanced_degree(&self) -> Option<usize> {
        let d = self.create.degree();
        (d == self.annihilate.degree()).then_some(d)
    }
}

/// Sum of normally ordered words with exact coefficients.
#[derive(Clone, PartialEq, Eq)]
pub struct OperatorExpr {
    modes: usize,
    words: BTreeMap<(Occupation, Occupation), NuScalar>,
}

impl OperatorExpr {
    pub fn zero(modes: usize) -> Self {
        OperatorExpr {
            modes,
            words: BTreeMap::new(),
        }
    }

    pub fn scalar(modes: usize, c: NuScalar) -> Self {
        let mut e = Self::zero(modes);
        e.add_word(Occupation::vacuum(modes), Occupation::vacuum(modes), c);
        e
    }

    pub fn identity(modes: usize) -> Self {
        Self::scalar(modes, NuScalar::one())
    }

    pub fn word(create: Occupation, annihilate: Occupation, coef: NuScalar) -> Self {
        assert_eq!(create.modes(), annihilate.modes());
        let mut e = Self::zero(create.modes());
        e.add_word(create, annihilate, coef);
        e
    }

    /// `P(a†) Q(a)`.
    pub fn normal_product(create: &ModePoly, annihilate: &ModePoly) -> Self {
        assert_eq!(create.modes, annihilate.modes);
        let mut e = Self::zero(create.modes);
        for (c, x) in &create.terms {
            for (a, y) in &annihilate.terms {
                e.add_word(c.clone(), a.clone(), x * y);
            }
        }
        e
    }

    pub fn from_words(
        modes: usize,
        words: impl IntoIterator<Item = OperatorWord>,
    ) -> Result<Self, OpError> {
        let mut e = Self::zero(modes);
        for w in words {
            for o in [&w.create, &w.annihilate] {
                if o.modes() != modes {
                    return Err(OpError::ModeMismatch {
                        expected: modes,
                        found: o.modes(),
                    });
                }
            }
            e.add_word(w.create, w.annihilate, w.coef);
        }
        Ok(e)
    }

    pub fn modes(&self) -> usize {
        self.modes
    }

    pub fn len(&self) -> usize {
        self.words.len()
    }

    pub fn is_empty(&self) -> bool {
        self.words.is_empty()
    }

    pub fn words(&self) -> impl Iterator<Item = OperatorWord> + '_ {
        self.words.iter().map(|((c, a), v)| OperatorWord {
            create: c.clone(),
            annihilate: a.clone(),
            coef: v.clone(),
        })
    }

    pub fn coefficient(&self, create: &Occupation, annihilate: &Occupation) -> NuScalar {
        self.words
            .get(&(create.clone(), annihilate.clone()))
            .cloned()
            .unwrap_or_default()
    }

    pub fn add_word(&mut self, create: Occupation, annihilate: Occupation, coef: NuScalar) {
        if coef.is_zero() {
            return;
        }
        let key = (create, annihilate);
        let sum = match self.words.get(&key) {
            Some(v) => v + &coef,
            None => coef,
        };
        if sum.is_zero() {
            self.words.remove(&key);
        } else {
            self.words.insert(key, sum);
        }
    }

    pub fn scale(&self, c: &NuScalar) -> OperatorExpr {
        let mut e = Self::zero(self.modes);
        for ((cr, an), v) in &self.words {
            e.add_word(cr.clone(), an.clone(), v * c);
        }
        e
    }

    /// Largest annihilation degree, `None` for the zero expression.
    pub fn max_degree(&self) -> Option<usize> {
        self.words.keys().map(|(_, a)| a.degree()).max()
    }

    /// Words whose annihilation degree is at most `degree`.
    pub fn truncated(&self, degree: usize) -> OperatorExpr {
        OperatorExpr {
            modes: self.modes,
            words: self
                .words
                .iter()
                .filter(|((_, a), _)| a.degree() <= degree)
                .map(|(k, v)| (k.clone(), v.clone()))
                .collect(),
        }
    }

    /// Hermitian conjugate: swaps the creation and annihilation parts.
    /// Coefficients are taken as real.
    pub fn adjoint(&self) -> OperatorExpr {
        OperatorExpr {
            modes: self.modes,
            words: self
                .words
                .iter()
                .map(|((c, a), v)| ((a.clone(), c.clone()), v.clone()))
                .collect(),
        }
    }

    /// Coefficients evaluated at a numeric ν.
    pub fn evaluate_at(&self, nu: &Rat) -> Result<OperatorExpr, OpError> {
        let mut e = Self::zero(self.modes);
        for ((c, a), v) in &self.words {
            let value = v.evaluate(nu).map_err(|err| match err {
                ScalarError::Pole { denominator, at } => OpError::ZeroPivot {
                    coefficient: Box::new(v.clone()),
                    denominator,
                    at,
                },
                other => unreachable!("evaluation only fails at poles: {other}"),
            })?;
            e.add_word(c.clone(), a.clone(), NuScalar::from_rat(value));
        }
        Ok(e)
    }

    /// Acts on a state: within each word the annihilations act first.
    pub fn apply(&self, params: &AlgebraParams, state: &FockState) -> FockState {
        assert_eq!(self.modes, params.modes(), "mode count mismatch");
        let mut out = FockState::zero(self.modes);
        let mut groups: BTreeMap<&Occupation, Vec<(&Occupation, &NuScalar)>> = BTreeMap::new();
        for ((c, a), v) in &self.words {
            groups.entry(a).or_default().push((c, v));
        }
        for (ann, words) in groups {
            let lowered = params.annihilate_occupation(ann, state);
            if lowered.is_zero() {
                continue;
            }
            for (create, coef) in words {
                for (o, x) in lowered.terms() {
                    out.add_term(o.plus(create), x * coef);
                }
            }
        }
        out
    }
}

impl Add for &OperatorExpr {
    type Output = OperatorExpr;
    fn add(self, rhs: &OperatorExpr) -> OperatorExpr {
        assert_eq!(self.modes, rhs.modes);
        let mut e = self.clone();
        for ((c, a), v) in &rhs.words {
            e.add_word(c.clone(), a.clone(), v.clone());
        }
        e
    }
}

impl Sub for &OperatorExpr {
    type Output = OperatorExpr;
    fn sub(self, rhs: &OperatorExpr) -> OperatorExpr {
        self + &(-rhs)
    }
}

impl Neg for &OperatorExpr {
    type Output = OperatorExpr;
    fn neg(self) -> OperatorExpr {
        self.scale(&NuScalar::from_int(-1))
    }
}

impl fmt::Debug for OperatorExpr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.words.is_empty() {
            return write!(f, "0");
        }
        for (k, ((c, a), v)) in self.words.iter().enumerate() {
            if k > 0 {
                write!(f, " + ")?;
            }
            write!(f, "({v}) a†{:?} a{:?}", c.counts(), a.counts())?;
        }
        Ok(())
    }
}

#[derive(Serialize, Deserialize)]
struct OperatorExprJson {
    modes: usize,
    words: Vec<OperatorWord>,
}

impl Serialize for OperatorExpr {
    fn serialize<S: serde::Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        OperatorExprJson {
            modes: self.modes,
            words: self.words().collect(),
        }
        .serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for OperatorExpr {
    fn deserialize<D: serde::Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let raw = OperatorExprJson::deserialize(deserializer)?;
        OperatorExpr::from_words(raw.modes, raw.words).map_err(serde::de::Error::custom)
    }
}

/// `B_{m,n} = Σ_k (a_k†)^m a_k^n`.
pub fn b_block(m: u32, n: u32, modes: usize) -> OperatorExpr {
    let mut e = OperatorExpr::zero(modes);
    for k in 0..modes {
        let power = |p: u32| {
            let mut v = vec![0; modes];
            v[k] = p;
            Occupation::new(v)
        };
        e.add_word(power(m), power(n), NuScalar::one());
    }
    e
}

#[cfg(test)]
mod tests {
    use super::*;

    fn occ(v: &[u32]) -> Occupation {
        Occupation::new(v.to_vec())
    }

    #[test]
    fn blocks() {
        let b01 = b_block(0, 1, 3);
        assert_eq!(b01.len(), 3);
        for k in 0..3 {
            assert!(b01.coefficient(&Occupation::vacuum(3), &Occupation::unit(3, k)).is_one());
        }
        let b11 = b_block(1, 1, 2);
        assert!(b11.coefficient(&occ(&[1, 0]), &occ(&[1, 0])).is_one());
        assert!(b11.coefficient(&occ(&[0, 1]), &occ(&[0, 1])).is_one());
        assert_eq!(b11.len(), 2);
        let b00 = b_block(0, 0, 4);
        assert_eq!(b00, OperatorExpr::scalar(4, NuScalar::from_int(4)));
        let b21 = b_block(2, 1, 2);
        assert!(b21.coefficient(&occ(&[2, 0]), &occ(&[1, 0])).is_one());
        assert_eq!(b21.len(), 2);
    }

    #[test]
    fn apply_examples() {
        let p = AlgebraParams::symbolic(3).unwrap();
        let one = FockState::monomial(occ(&[1, 0, 0]));
        let n1 = OperatorExpr::word(occ(&[1, 0, 0]), occ(&[1, 0, 0]), NuScalar::one());
        assert_eq!(n1.apply(&p, &one), one.scale(&NuScalar::linear(1, 2)));
        let s = FockState::monomial(occ(&[2, 0, 1]));
        assert_eq!(OperatorExpr::identity(3).apply(&p, &s), s);
        let free = AlgebraParams::at(2, Rat::zero()).unwrap();
        let one2 = FockState::monomial(occ(&[1, 0]));
        assert_eq!(b_block(1, 1, 2).apply(&free, &one2), one2);
        // B_{1,1} a_1†|0⟩ for M = 2: a_1†a_1 gives 1+ν, a_2†a_1 gives −ν a_2†.
        let p2 = AlgebraParams::symbolic(2).unwrap();
        let expect = &one2.scale(&NuScalar::linear(1, 1))
            - &FockState::monomial(occ(&[0, 1])).scale(&NuScalar::nu());
        assert_eq!(b_block(1, 1, 2).apply(&p2, &one2), expect);
    }

    #[test]
    fn normal_product_expands() {
        // (a_1† − a_2†)(a_1 − a_2) has four words.
        let b12 = ModePoly::linear(3, &[1, -1, 0]);
        let e = OperatorExpr::normal_product(&b12, &b12);
        assert_eq!(e.len(), 4);
        assert_eq!(
            e.coefficient(&occ(&[1, 0, 0]), &occ(&[0, 1, 0])),
            NuScalar::from_int(-1)
        );
        let sq = b12.pow(2);
        assert_eq!(sq.terms().count(), 3);
        assert_eq!(e.adjoint(), e);
    }

    #[test]
    fn evaluate_reports_poles() {
        let c = NuScalar::one().checked_div(&NuScalar::linear(1, 3)).unwrap();
        let e = OperatorExpr::scalar(3, c);
        match e.evaluate_at(&Rat::new(-1, 3)) {
            Err(OpError::ZeroPivot { at, .. }) => assert_eq!(at, Rat::new(-1, 3)),
            other => panic!("{other:?}"),
        }
        let v = e.evaluate_at(&Rat::one()).unwrap();
        assert_eq!(v, OperatorExpr::scalar(3, NuScalar::from_rat(Rat::new(1, 4))));
    }

    #[test]
    fn json_round_trip() {
        let e = &b_block(1, 1, 2) + &OperatorExpr::scalar(2, NuScalar::nu());
        let text = serde_json::to_string(&e).unwrap();
        assert!(text.starts_with(r#"{"modes":2,"words":[{"create":[0,0],"annihilate":[0,0],"coef":"#));
        let back: OperatorExpr = serde_json::from_str(&text).unwrap();
        assert_eq!(back, e);
    }
}
