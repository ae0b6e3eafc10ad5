//! Occupation-number Fock space over `M` modes and the actions of the
//! S_M-extended Heisenberg algebra on it.
//!
//! Creation operators commute, so a monomial state is labelled by its
//! occupation vector `(n_1, …, n_M)` and a general state is a sparse linear
//! combination of occupations. Modes are 0-based in the library API; JSON and
//! CLI surfaces use 1-based mode labels.
//!
//! The annihilation operator acts on a monomial as
//!
//! ```text
//! a_i |n⟩ = n_i |n - e_i⟩
//!         + ν Σ_{j≠i} sgn(n_i - n_j) Σ_{k=1}^{|n_i - n_j|} |…, n_i → min+k-1, …, n_j → max-k, …⟩
//! ```
//!
//! with `sgn(0) = 0`. Everything else (Gram matrices, operator expansions) is
//! built on this rule together with commuting creations, the exchange
//! operators `K_ij` (swap of two occupations, `K_ij|0⟩ = |0⟩`), and the
//! bosonic duals `ã_i`.

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Neg, Sub};
use std::str::FromStr;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::scalar::{NuScalar, Rat, ScalarError};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum FockError {
    #[error("at least one mode is required")]
    NoModes,
    #[error("exchange needs two distinct modes, got {0} twice")]
    InvalidModePair(usize),
    #[error("mode {mode} out of range for {modes} modes")]
    ModeOutOfRange { mode: usize, modes: usize },
    #[error("basis of size {size} exceeds the limit {limit}")]
    BasisTooLarge { size: u128, limit: u128 },
    #[error("{modes} modes exceed the limit {limit}")]
    TooManyModes { modes: usize, limit: usize },
    #[error("degree {degree} exceeds the limit {limit}")]
    DegreeTooLarge { degree: usize, limit: usize },
    #[error("state has {found} modes, expected {expected}")]
    ModeMismatch { expected: usize, found: usize },
}

/// Size limits for basis enumeration.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Guards {
    pub max_modes: usize,
    pub max_degree: usize,
    /// Largest basis (sequence or multiset) that may be enumerated.
    pub max_basis: u128,
}

impl Default for Guards {
    fn default() -> Self {
        Guards {
            max_modes: 6,
            max_degree: 6,
            max_basis: 200_000,
        }
    }
}

impl Guards {
    pub fn check(&self, modes: usize, degree: usize, size: u128) -> Result<(), FockError> {
        if size > self.max_basis {
            return Err(FockError::BasisTooLarge {
                size,
                limit: self.max_basis,
            });
        }
        if modes > self.max_modes {
            return Err(FockError::TooManyModes {
                modes,
                limit: self.max_modes,
            });
        }
        if degree > self.max_degree {
            return Err(FockError::DegreeTooLarge {
                degree,
                limit: self.max_degree,
            });
        }
        Ok(())
    }
}

/// The coupling as given by a user: the indeterminate ν or a rational value.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum Coupling {
    Symbolic,
    Value(Rat),
}

impl Coupling {
    pub fn to_scalar(&self) -> NuScalar {
        match self {
            Coupling::Symbolic => NuScalar::nu(),
            Coupling::Value(v) => NuScalar::from_rat(v.clone()),
        }
    }
}

impl FromStr for Coupling {
    type Err = ScalarError;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.trim() {
            "symbolic" | "nu" => Ok(Coupling::Symbolic),
            other => other.parse().map(Coupling::Value),
        }
    }
}

impl fmt::Display for Coupling {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Coupling::Symbolic => write!(f, "symbolic"),
            Coupling::Value(v) => write!(f, "{v}"),
        }
    }
}

impl Serialize for Coupling {
    fn serialize<S: serde::Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for Coupling {
    fn deserialize<D: serde::Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        String::deserialize(deserializer)?
            .parse()
            .map_err(serde::de::Error::custom)
    }
}

/// Number of modes and the coupling ν.
///
/// Positivity (`1 + Mν > 0`) is never assumed; ask [`AlgebraParams::positivity`].
#[derive(Debug, Clone, PartialEq)]
pub struct AlgebraParams {
    modes: usize,
    coupling: Coupling,
    nu: NuScalar,
}

impl AlgebraParams {
    pub fn new(modes: usize, coupling: Coupling) -> Result<Self, FockError> {
        if modes == 0 {
            return Err(FockError::NoModes);
        }
        let nu = coupling.to_scalar();
        Ok(AlgebraParams {
            modes,
            coupling,
            nu,
        })
    }

    pub fn symbolic(modes: usize) -> Result<Self, FockError> {
        Self::new(modes, Coupling::Symbolic)
    }

    pub fn at(modes: usize, nu: Rat) -> Result<Self, FockError> {
        Self::new(modes, Coupling::Value(nu))
    }

    pub fn modes(&self) -> usize {
        self.modes
    }

    pub fn coupling(&self) -> &Coupling {
        &self.coupling
    }

    pub fn nu(&self) -> &NuScalar {
        &self.nu
    }

    pub fn nu_value(&self) -> Option<&Rat> {
        match &self.coupling {
            Coupling::Value(v) => Some(v),
            Coupling::Symbolic => None,
        }
    }

    pub fn is_symbolic(&self) -> bool {
        matches!(self.coupling, Coupling::Symbolic)
    }

    /// Same mode count at a concrete coupling.
    pub fn at_value(&self, nu: Rat) -> AlgebraParams {
        AlgebraParams::at(self.modes, nu).expect("mode count already validated")
    }

    /// The critical coupling `-1/M`.
    pub fn critical_nu(&self) -> Rat {
        Rat::new(-1, self.modes as i64)
    }

    /// `1 + Mν`.
    pub fn positivity_margin(&self) -> NuScalar {
        NuScalar::one() + self.nu.scale(&Rat::from(self.modes as i64))
    }

    /// Whether `1 + Mν > 0`; `None` for symbolic ν.
    pub fn positivity(&self) -> Option<bool> {
        self.positivity_margin().as_rat().map(|m| m.is_positive())
    }

    /// Ground-state energy `E_0 = (M/2)(1 + ν(M-1))`.
    pub fn ground_energy(&self) -> NuScalar {
        let m = self.modes as i64;
        let inner = NuScalar::one() + self.nu.scale(&Rat::from(m - 1));
        inner.scale(&Rat::new(m, 2))
    }

    fn check_mode(&self, i: usize) {
        assert!(
            i < self.modes,
            "mode {i} out of range for {} modes",
            self.modes
        );
    }

    /// Action of the annihilation operator `a_i`.
    pub fn annihilate(&self, i: usize, state: &FockState) -> FockState {
        self.check_mode(i);
        debug_assert_eq!(state.modes, self.modes);
        let mut out = FockState::zero(self.modes);
        for (occ, coef) in &state.terms {
            let n = &occ.0;
            if n[i] > 0 {
                out.add_term(occ.decremented(i), coef.scale(&Rat::from(n[i] as i64)));
            }
            let nu_coef = coef * &self.nu;
            if nu_coef.is_zero() {
                continue;
            }
            let neg = -&nu_coef;
            for j in (0..self.modes).filter(|&j| j != i) {
                let (ni, nj) = (n[i], n[j]);
                if ni == nj {
                    continue;
                }
                let (lo, hi) = (ni.min(nj), ni.max(nj));
                let c = if ni > nj { &nu_coef } else { &neg };
                for k in 1..=(hi - lo) {
                    let mut m = n.clone();
                    m[i] = lo + k - 1;
                    m[j] = hi - k;
                    out.add_term(Occupation(m), c.clone());
                }
            }
        }
        out
    }

    /// Apply `a_{k}` for every mode in `sequence` (annihilators commute).
    pub fn annihilate_all(&self, sequence: &[usize], state: &FockState) -> FockState {
        sequence
            .iter()
            .fold(state.clone(), |acc, &i| self.annihilate(i, &acc))
    }

    /// Apply `a_k^{m_k}` for every mode `k` of an occupation vector.
    pub fn annihilate_occupation(&self, occ: &Occupation, state: &FockState) -> FockState {
        let mut acc = state.clone();
        for (k, &m) in occ.0.iter().enumerate() {
            for _ in 0..m {
                if acc.is_zero() {
                    return acc;
                }
                acc = self.annihilate(k, &acc);
            }
        }
        acc
    }

    /// `[a_i, a_j†]` evaluated from its exchange-operator form
    /// `(1 + ν Σ_{k≠i} K_ik) δ_ij − ν K_ij`.
    pub fn commutator_action(&self, i: usize, j: usize, state: &FockState) -> FockState {
        self.check_mode(i);
        self.check_mode(j);
        if i == j {
            let mut out = state.clone();
            for k in (0..self.modes).filter(|&k| k != i) {
                out = &out + &state.swapped(i, k).scale(&self.nu);
            }
            out
        } else {
            state.swapped(i, j).scale(&-&self.nu)
        }
    }

    /// `⟨bra|ket⟩` where the bra is the monomial `a†_{i_1} ⋯ a†_{i_n}|0⟩`.
    pub fn inner_product(&self, bra: &ModeSequence, ket: &FockState) -> NuScalar {
        if let Some(d) = ket.homogeneous_degree() {
            if d != bra.len() {
                return NuScalar::zero();
            }
        }
        self.annihilate_all(&bra.0, ket).vacuum_coefficient()
    }
}

/// Occupation numbers `(n_1, …, n_M)` of a monomial state.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Occupation(Vec<u32>);

impl Occupation {
    pub fn new(counts: Vec<u32>) -> Self {
        Occupation(counts)
    }

    pub fn vacuum(modes: usize) -> Self {
        Occupation(vec![0; modes])
    }

    /// Single quantum in mode `i`.
    pub fn unit(modes: usize, i: usize) -> Self {
        let mut v = vec![0; modes];
        v[i] = 1;
        Occupation(v)
    }

    pub fn counts(&self) -> &[u32] {
        &self.0
    }

    pub fn modes(&self) -> usize {
        self.0.len()
    }

    pub fn degree(&self) -> usize {
        self.0.iter().map(|&n| n as usize).sum()
    }

    pub fn count(&self, i: usize) -> u32 {
        self.0[i]
    }

    pub fn incremented(&self, i: usize) -> Self {
        let mut v = self.0.clone();
        v[i] += 1;
        Occupation(v)
    }

    /// Panics if mode `i` is empty.
    pub fn decremented(&self, i: usize) -> Self {
        let mut v = self.0.clone();
        v[i] -= 1;
        Occupation(v)
    }

    pub fn swapped(&self, i: usize, j: usize) -> Self {
        let mut v = self.0.clone();
        v.swap(i, j);
        Occupation(v)
    }

    /// Componentwise sum.
    pub fn plus(&self, other: &Occupation) -> Self {
        Occupation(self.0.iter().zip(&other.0).map(|(a, b)| a + b).collect())
    }

    /// Mode `k` becomes mode `perm[k]`.
    pub fn relabeled(&self, perm: &[usize]) -> Self {
        let mut v = vec![0; self.0.len()];
        for (k, &n) in self.0.iter().enumerate() {
            v[perm[k]] = n;
        }
        Occupation(v)
    }

    /// Nondecreasing mode sequence with these multiplicities.
    pub fn mode_sequence(&self) -> ModeSequence {
        ModeSequence(
            self.0
                .iter()
                .enumerate()
                .flat_map(|(k, &n)| std::iter::repeat_n(k, n as usize))
                .collect(),
        )
    }

    /// `Π n_k!`, the free-boson norm.
    pub fn factorial_product(&self) -> Rat {
        self.0
            .iter()
            .map(|&n| (1..=n as i64).map(Rat::from).product::<Rat>())
            .product()
    }
}

impl fmt::Debug for Occupation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "|")?;
        for (k, n) in self.0.iter().enumerate() {
            if k > 0 {
                write!(f, ",")?;
            }
            write!(f, "{n}")?;
        }
        write!(f, "⟩")
    }
}

/// Ordered creation string `a†_{i_1} ⋯ a†_{i_n}` (0-based modes).
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct ModeSequence(Vec<usize>);

impl ModeSequence {
    pub fn new(indices: Vec<usize>) -> Self {
        ModeSequence(indices)
    }

    /// From 1-based labels, as written in the literature and on the CLI.
    pub fn from_one_based(labels: &[usize]) -> Self {
        ModeSequence(labels.iter().map(|&l| l - 1).collect())
    }

    pub fn indices(&self) -> &[usize] {
        &self.0
    }

    pub fn one_based(&self) -> Vec<usize> {
        self.0.iter().map(|&i| i + 1).collect()
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn occupation(&self, modes: usize) -> Occupation {
        let mut v = vec![0; modes];
        for &i in &self.0 {
            v[i] += 1;
        }
        Occupation(v)
    }

    pub fn validate(&self, modes: usize) -> Result<(), FockError> {
        match self.0.iter().find(|&&i| i >= modes) {
            Some(&mode) => Err(FockError::ModeOutOfRange { mode, modes }),
            None => Ok(()),
        }
    }
}

impl From<&Occupation> for ModeSequence {
    fn from(occ: &Occupation) -> Self {
        occ.mode_sequence()
    }
}

/// Index set of a Gram matrix.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum BasisKind {
    /// All index strings in `{1..M}^n`.
    Sequence,
    /// One representative (nondecreasing string) per occupation class.
    Multiset,
}

impl FromStr for BasisKind {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "sequence" => Ok(BasisKind::Sequence),
            "multiset" => Ok(BasisKind::Multiset),
            other => Err(format!("unknown basis kind {other:?}")),
        }
    }
}

impl fmt::Display for BasisKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            BasisKind::Sequence => "sequence",
            BasisKind::Multiset => "multiset",
        })
    }
}

/// `C(M+n-1, n)`, saturating.
pub fn multiset_dimension(modes: usize, n: usize) -> u128 {
    let mut acc: u128 = 1;
    for k in 1..=n as u128 {
        acc = acc.saturating_mul(modes as u128 - 1 + k) / k;
    }
    acc
}

pub fn basis_size(modes: usize, n: usize, kind: BasisKind) -> u128 {
    match kind {
        BasisKind::Sequence => {
            (0..n).fold(1u128, |acc, _| acc.saturating_mul(modes as u128))
        }
        BasisKind::Multiset => multiset_dimension(modes, n),
    }
}

/// Index strings of length `n` over `modes` modes in lexicographic order.
pub fn enumerate_basis(
    modes: usize,
    n: usize,
    kind: BasisKind,
    guards: &Guards,
) -> Result<Vec<ModeSequence>, FockError> {
    if modes == 0 {
        return Err(FockError::NoModes);
    }
    guards.check(modes, n, basis_size(modes, n, kind))?;
    let mut out = Vec::new();
    let mut current = Vec::with_capacity(n);
    fn rec(
        modes: usize,
        n: usize,
        kind: BasisKind,
        current: &mut Vec<usize>,
        out: &mut Vec<ModeSequence>,
    ) {
        if current.len() == n {
            out.push(ModeSequence(current.clone()));
            return;
        }
        let start = match kind {
            BasisKind::Sequence => 0,
            BasisKind::Multiset => current.last().copied().unwrap_or(0),
        };
        for i in start..modes {
            current.push(i);
            rec(modes, n, kind, current, out);
            current.pop();
        }
    }
    rec(modes, n, kind, &mut current, &mut out);
    Ok(out)
}

/// Occupations of total degree `n`, in the order of the multiset basis.
pub fn occupations_of_degree(
    modes: usize,
    n: usize,
    guards: &Guards,
) -> Result<Vec<Occupation>, FockError> {
    Ok(enumerate_basis(modes, n, BasisKind::Multiset, guards)?
        .iter()
        .map(|s| s.occupation(modes))
        .collect())
}

/// All occupations of degree `0..=max_degree`, grouped by degree.
pub fn occupations_up_to(
    modes: usize,
    max_degree: usize,
    guards: &Guards,
) -> Result<Vec<Occupation>, FockError> {
    let mut out = Vec::new();
    for n in 0..=max_degree {
        out.extend(occupations_of_degree(modes, n, guards)?);
    }
    Ok(out)
}

/// Sparse linear combination of occupation states with [`NuScalar`] coefficients.
///
/// Zero coefficients are never stored; terms iterate in lexicographic
/// occupation order.
#[derive(Clone, PartialEq, Eq)]
pub struct FockState {
    modes: usize,
    terms: BTreeMap<Occupation, NuScalar>,
}

impl FockState {
    pub fn zero(modes: usize) -> Self {
        FockState {
            modes,
            terms: BTreeMap::new(),
        }
    }

    pub fn vacuum(modes: usize) -> Self {
        Self::monomial(Occupation::vacuum(modes))
    }

    pub fn monomial(occ: Occupation) -> Self {
        let modes = occ.modes();
        let mut s = Self::zero(modes);
        s.terms.insert(occ, NuScalar::one());
        s
    }

    /// `a†_{i_1} ⋯ a†_{i_n}|0⟩`.
    pub fn from_sequence(modes: usize, seq: &ModeSequence) -> Self {
        Self::monomial(seq.occupation(modes))
    }

    pub fn from_terms(
        modes: usize,
        terms: impl IntoIterator<Item = (Occupation, NuScalar)>,
    ) -> Result<Self, FockError> {
        let mut s = Self::zero(modes);
        for (occ, coef) in terms {
            if occ.modes() != modes {
                return Err(FockError::ModeMismatch {
                    expected: modes,
                    found: occ.modes(),
                });
            }
            s.add_term(occ, coef);
        }
        Ok(s)
    }

    pub fn modes(&self) -> usize {
        self.modes
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Occupation, &NuScalar)> {
        self.terms.iter()
    }

    pub fn coefficient(&self, occ: &Occupation) -> NuScalar {
        self.terms.get(occ).cloned().unwrap_or_default()
    }

    pub fn vacuum_coefficient(&self) -> NuScalar {
        self.coefficient(&Occupation::vacuum(self.modes))
    }

    pub fn add_term(&mut self, occ: Occupation, coef: NuScalar) {
        if coef.is_zero() {
            return;
        }
        match self.terms.entry(occ) {
            std::collections::btree_map::Entry::Vacant(e) => {
                e.insert(coef);
            }
            std::collections::btree_map::Entry::Occupied(mut e) => {
                let sum = e.get() + &coef;
                if sum.is_zero() {
                    e.remove();
                } else {
                    *e.get_mut() = sum;
                }
            }
        }
    }

    pub fn scale(&self, factor: &NuScalar) -> FockState {
        if factor.is_zero() {
            return FockState::zero(self.modes);
        }
        FockState {
            modes: self.modes,
            terms: self
                .terms
                .iter()
                .map(|(o, c)| (o.clone(), c * factor))
                .collect(),
        }
    }

    pub fn scale_rat(&self, factor: &Rat) -> FockState {
        self.scale(&NuScalar::from_rat(factor.clone()))
    }

    /// Total degree if every term has the same degree (the zero state has none).
    pub fn homogeneous_degree(&self) -> Option<usize> {
        let mut degrees = self.terms.keys().map(Occupation::degree);
        let first = degrees.next()?;
        degrees.all(|d| d == first).then_some(first)
    }

    /// Creation `a_i†`: increments `n_i` (creations commute).
    pub fn create(&self, i: usize) -> FockState {
        assert!(i < self.modes, "mode {i} out of range for {} modes", self.modes);
        FockState {
            modes: self.modes,
            terms: self
                .terms
                .iter()
                .map(|(o, c)| (o.incremented(i), c.clone()))
                .collect(),
        }
    }

    /// Apply `Π_k (a_k†)^{m_k}`.
    pub fn create_occupation(&self, occ: &Occupation) -> FockState {
        FockState {
            modes: self.modes,
            terms: self
                .terms
                .iter()
                .map(|(o, c)| (o.plus(occ), c.clone()))
                .collect(),
        }
    }

    /// Exchange `K_ij`: swaps occupations of modes `i` and `j`.
    pub fn exchange(&self, i: usize, j: usize) -> Result<FockState, FockError> {
        if i == j {
            return Err(FockError::InvalidModePair(i));
        }
        for m in [i, j] {
            if m >= self.modes {
                return Err(FockError::ModeOutOfRange {
                    mode: m,
                    modes: self.modes,
                });
            }
        }
        Ok(self.swapped(i, j))
    }

    pub(crate) fn swapped(&self, i: usize, j: usize) -> FockState {
        FockState {
            modes: self.modes,
            terms: self
                .terms
                .iter()
                .map(|(o, c)| (o.swapped(i, j), c.clone()))
                .collect(),
        }
    }

    /// Transition number `N_ij = a_i† ã_j`: moves one quantum from mode `j` to
    /// mode `i` with multiplicity `n_j`. `N_ii` multiplies by `n_i`.
    pub fn transition(&self, i: usize, j: usize) -> FockState {
        self.dual_annihilate(j).create(i)
    }

    /// Bosonic dual `ã_i`: `n_i` times the occupation with `n_i` lowered.
    pub fn dual_annihilate(&self, i: usize) -> FockState {
        assert!(i < self.modes, "mode {i} out of range for {} modes", self.modes);
        let mut out = FockState::zero(self.modes);
        for (o, c) in &self.terms {
            let n = o.count(i);
            if n > 0 {
                out.add_term(o.decremented(i), c.scale(&Rat::from(n as i64)));
            }
        }
        out
    }

    /// Relabel every mode `k` as `perm[k]`.
    pub fn relabeled(&self, perm: &[usize]) -> FockState {
        FockState {
            modes: self.modes,
            terms: self
                .terms
                .iter()
                .map(|(o, c)| (o.relabeled(perm), c.clone()))
                .collect(),
        }
    }

    /// Evaluate every coefficient at a concrete ν.
    pub fn evaluate(&self, nu: &Rat) -> Result<FockState, ScalarError> {
        let mut out = FockState::zero(self.modes);
        for (o, c) in &self.terms {
            out.add_term(o.clone(), NuScalar::from_rat(c.evaluate(nu)?));
        }
        Ok(out)
    }
}

impl Add for &FockState {
    type Output = FockState;
    fn add(self, rhs: &FockState) -> FockState {
        debug_assert_eq!(self.modes, rhs.modes);
        let mut out = self.clone();
        for (o, c) in &rhs.terms {
            out.add_term(o.clone(), c.clone());
        }
        out
    }
}

impl Sub for &FockState {
    type Output = FockState;
    fn sub(self, rhs: &FockState) -> FockState {
        debug_assert_eq!(self.modes, rhs.modes);
        let mut out = self.clone();
        for (o, c) in &rhs.terms {
            out.add_term(o.clone(), -c);
        }
        out
    }
}

impl Neg for &FockState {
    type Output = FockState;
    fn neg(self) -> FockState {
        self.scale(&NuScalar::from_int(-1))
    }
}

impl fmt::Debug for FockState {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (k, (o, c)) in self.terms.iter().enumerate() {
            if k > 0 {
                write!(f, " + ")?;
            }
            write!(f, "({c}){o:?}")?;
        }
        Ok(())
    }
}

#[derive(Serialize, Deserialize)]
struct TermJson {
    occ: Occupation,
    coef: NuScalar,
}

#[derive(Serialize, Deserialize)]
struct FockStateJson {
    modes: usize,
    terms: Vec<TermJson>,
}

impl Serialize for FockState {
    fn serialize<S: serde::Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        FockStateJson {
            modes: self.modes,
            terms: self
                .terms
                .iter()
                .map(|(o, c)| TermJson {
                    occ: o.clone(),
                    coef: c.clone(),
                })
                .collect(),
        }
        .serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for FockState {
    fn deserialize<D: serde::Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let raw = FockStateJson::deserialize(deserializer)?;
        FockState::from_terms(raw.modes, raw.terms.into_iter().map(|t| (t.occ, t.coef)))
            .map_err(serde::de::Error::custom)
    }
}
