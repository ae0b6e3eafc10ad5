//! Gram matrices `⟨0|a_{i_n}⋯a_{i_1} a†_{j_1}⋯a†_{j_n}|0⟩` of n-particle states.
//!
//! Because creations (and annihilations) commute, an entry only depends on
//! the occupation classes of the two index strings. Every matrix is therefore
//! stored as the small class-by-class matrix plus the class of each basis
//! element, and the sequence-basis matrix is its expansion.

use std::collections::HashMap;
use std::fmt;
use std::str::FromStr;

use rayon::prelude::*;
use serde::ser::SerializeStruct;
use serde::{Serialize, Serializer};
use thiserror::Error;

use crate::fock::{
    enumerate_basis, multiset_dimension, AlgebraParams, BasisKind, FockError, FockState, Guards,
    ModeSequence, Occupation,
};
use crate::linalg::{self, NoConvergence};
use crate::scalar::{NuScalar, Rat, ScalarError};

pub const DEFAULT_EIGEN_TOL: f64 = 1e-10;
pub const DEFAULT_MAX_SWEEPS: usize = 100;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum GramError {
    #[error(transparent)]
    Fock(#[from] FockError),
    #[error(transparent)]
    Scalar(#[from] ScalarError),
    #[error(transparent)]
    NoConvergence(#[from] NoConvergence),
    #[error("operation needs a numeric coupling, got symbolic nu")]
    Symbolic,
    #[error("{family} does not apply to {modes} modes")]
    NotApplicable { family: EigenFamily, modes: usize },
    #[error("empty or descending grid")]
    BadGrid,
}

#[derive(Debug, Clone, PartialEq)]
pub struct GramMatrix {
    params: AlgebraParams,
    particles: usize,
    kind: BasisKind,
    index: Vec<ModeSequence>,
    classes: Vec<Occupation>,
    class_of: Vec<usize>,
    class_entries: Vec<Vec<NuScalar>>,
}

/// Vacuum expectation values `⟨bra|ket⟩` for every multiset bra, in multiset
/// basis order, sharing annihilation prefixes between bras.
fn column(params: &AlgebraParams, ket: &Occupation, n: usize) -> Vec<NuScalar> {
    fn rec(
        params: &AlgebraParams,
        state: &FockState,
        start: usize,
        remaining: usize,
        out: &mut Vec<NuScalar>,
    ) {
        if remaining == 0 {
            out.push(state.vacuum_coefficient());
            return;
        }
        let modes = params.modes();
        if state.is_zero() {
            let leaves = multiset_dimension(modes - start, remaining) as usize;
            out.extend(std::iter::repeat_with(NuScalar::zero).take(leaves));
            return;
        }
        for k in start..modes {
            let next = params.annihilate(k, state);
            rec(params, &next, k, remaining - 1, out);
        }
    }
    let mut out = Vec::new();
    rec(params, &FockState::monomial(ket.clone()), 0, n, &mut out);
    out
}

/// Gram matrix of `n`-particle states over the chosen basis.
pub fn build_gram(
    params: &AlgebraParams,
    n: usize,
    kind: BasisKind,
    guards: &Guards,
) -> Result<GramMatrix, GramError> {
    let index = enumerate_basis(params.modes(), n, kind, guards)?;
    let classes: Vec<Occupation> = match kind {
        BasisKind::Multiset => index.iter().map(|s| s.occupation(params.modes())).collect(),
        BasisKind::Sequence => enumerate_basis(params.modes(), n, BasisKind::Multiset, guards)?
            .iter()
            .map(|s| s.occupation(params.modes()))
            .collect(),
    };
    let position: HashMap<&Occupation, usize> =
        classes.iter().enumerate().map(|(k, o)| (o, k)).collect();
    let class_of = index
        .iter()
        .map(|s| position[&s.occupation(params.modes())])
        .collect();
    let columns: Vec<Vec<NuScalar>> = classes
        .par_iter()
        .map(|ket| column(params, ket, n))
        .collect();
    let dim = classes.len();
    let class_entries = (0..dim)
        .map(|r| (0..dim).map(|c| columns[c][r].clone()).collect())
        .collect();
    Ok(GramMatrix {
        params: params.clone(),
        particles: n,
        kind,
        index,
        classes,
        class_of,
        class_entries,
    })
}

impl GramMatrix {
    pub fn params(&self) -> &AlgebraParams {
        &self.params
    }

    pub fn particles(&self) -> usize {
        self.particles
    }

    pub fn basis_kind(&self) -> BasisKind {
        self.kind
    }

    pub fn index(&self) -> &[ModeSequence] {
        &self.index
    }

    pub fn dim(&self) -> usize {
        self.index.len()
    }

    /// Number of occupation classes, i.e. the multiset dimension.
    pub fn multiset_dim(&self) -> usize {
        self.classes.len()
    }

    pub fn classes(&self) -> &[Occupation] {
        &self.classes
    }

    pub fn class_matrix(&self) -> &[Vec<NuScalar>] {
        &self.class_entries
    }

    pub fn entry(&self, row: usize, col: usize) -> &NuScalar {
        &self.class_entries[self.class_of[row]][self.class_of[col]]
    }

    /// Entry addressed by index strings; `None` if either is not in the basis
    /// or has the wrong length.
    pub fn entry_for(&self, bra: &ModeSequence, ket: &ModeSequence) -> Option<&NuScalar> {
        let m = self.params.modes();
        if bra.len() != self.particles || ket.len() != self.particles {
            return None;
        }
        bra.validate(m).ok()?;
        ket.validate(m).ok()?;
        let find = |s: &ModeSequence| {
            let o = s.occupation(m);
            self.classes.iter().position(|c| *c == o)
        };
        Some(&self.class_entries[find(bra)?][find(ket)?])
    }

    pub fn entries(&self) -> Vec<Vec<NuScalar>> {
        (0..self.dim())
            .map(|r| (0..self.dim()).map(|c| self.entry(r, c).clone()).collect())
            .collect()
    }

    pub fn is_symmetric(&self) -> bool {
        let d = self.class_entries.len();
        (0..d).all(|r| (r + 1..d).all(|c| self.class_entries[r][c] == self.class_entries[c][r]))
    }

    pub fn trace(&self) -> NuScalar {
        (0..self.dim()).map(|k| self.entry(k, k).clone()).sum()
    }

    /// `G·v` for exact coordinates in this basis.
    pub fn apply(&self, v: &[Rat]) -> Vec<NuScalar> {
        assert_eq!(v.len(), self.dim());
        let mut folded = vec![Rat::zero(); self.classes.len()];
        for (k, x) in v.iter().enumerate() {
            folded[self.class_of[k]] += x;
        }
        let row_values: Vec<NuScalar> = self
            .class_entries
            .iter()
            .map(|row| {
                row.iter()
                    .zip(&folded)
                    .filter(|(_, x)| !x.is_zero())
                    .map(|(g, x)| g.scale(x))
                    .sum()
            })
            .collect();
        (0..self.dim()).map(|r| row_values[self.class_of[r]].clone()).collect()
    }

    /// Same matrix with ν replaced by a number.
    pub fn evaluate(&self, nu: &Rat) -> Result<GramMatrix, GramError> {
        let class_entries = self
            .class_entries
            .iter()
            .map(|row| {
                row.iter()
                    .map(|e| e.evaluate(nu).map(NuScalar::from_rat))
                    .collect::<Result<Vec<_>, _>>()
            })
            .collect::<Result<Vec<_>, _>>()?;
        Ok(GramMatrix {
            params: self.params.at_value(nu.clone()),
            class_entries,
            ..self.clone()
        })
    }

    pub fn rational_entries(&self) -> Result<Vec<Vec<Rat>>, GramError> {
        let classes = self
            .class_entries
            .iter()
            .map(|row| row.iter().map(|e| e.as_rat().ok_or(GramError::Symbolic)).collect())
            .collect::<Result<Vec<Vec<Rat>>, _>>()?;
        Ok((0..self.dim())
            .map(|r| {
                (0..self.dim())
                    .map(|c| classes[self.class_of[r]][self.class_of[c]].clone())
                    .collect()
            })
            .collect())
    }

    /// Exact rank over the rationals; needs a numeric coupling.
    pub fn rank_exact(&self) -> Result<usize, GramError> {
        Ok(linalg::rank_exact(&self.rational_entries()?))
    }

    /// Numeric spectrum, exact rank and positivity at a numeric coupling.
    pub fn eigen_numeric(&self, tol: f64, max_sweeps: usize) -> Result<SpectrumReport, GramError> {
        let nu = self.params.nu_value().ok_or(GramError::Symbolic)?.clone();
        let exact = self.rational_entries()?;
        let numeric: Vec<Vec<f64>> = exact
            .iter()
            .map(|row| row.iter().map(Rat::to_f64).collect())
            .collect();
        let eigenvalues = linalg::symmetric_eigenvalues(&numeric, tol, max_sweeps)?;
        let rank = linalg::rank_exact(&exact);
        let trace: f64 = (0..numeric.len()).map(|k| numeric[k][k]).sum();
        let zero_threshold = 1e-9 * (1.0 + trace.abs());
        let min_eigenvalue = eigenvalues.first().copied().unwrap_or(0.0);
        let multiset_dim = self.multiset_dim();
        Ok(SpectrumReport {
            nu,
            near_zero: eigenvalues.iter().filter(|v| v.abs() <= zero_threshold).count(),
            positivity: min_eigenvalue >= -zero_threshold && rank == multiset_dim,
            eigenvalues,
            min_eigenvalue,
            rank,
            multiset_dim,
        })
    }
}

impl Serialize for GramMatrix {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        #[derive(Serialize)]
        struct Basis {
            kind: BasisKind,
            index_strings: Vec<Vec<usize>>,
        }
        let mut st = serializer.serialize_struct("GramMatrix", 5)?;
        st.serialize_field("modes", &self.params.modes())?;
        st.serialize_field("particles", &self.particles)?;
        st.serialize_field("nu", self.params.coupling())?;
        st.serialize_field(
            "basis",
            &Basis {
                kind: self.kind,
                index_strings: self.index.iter().map(ModeSequence::one_based).collect(),
            },
        )?;
        st.serialize_field("entries", &self.entries())?;
        st.end()
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SpectrumReport {
    pub nu: Rat,
    /// Ascending.
    pub eigenvalues: Vec<f64>,
    pub min_eigenvalue: f64,
    /// Eigenvalues within `1e-9·(1 + |trace|)` of zero.
    pub near_zero: usize,
    /// Exact rank.
    pub rank: usize,
    pub multiset_dim: usize,
    /// No eigenvalue below `−1e-9·(1 + |trace|)` and full multiset rank.
    pub positivity: bool,
}

/// The four distinct two-particle Gram entries.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum TwoParticleEntry {
    /// `⟨a_i² a_i†²⟩`
    A,
    /// `⟨a_i² a_j†²⟩`, `⟨a_i a_j a_i†²⟩`, `⟨a_i a_j a_i† a_k†⟩`
    B,
    /// `⟨a_i a_j a_k†²⟩`, `⟨a_i a_j a_k† a_l†⟩`
    C,
    /// `⟨a_i a_j a_i† a_j†⟩`
    D,
}

impl TwoParticleEntry {
    /// Which entry `⟨bra|ket⟩` is, for two-particle index strings.
    pub fn classify(bra: &ModeSequence, ket: &ModeSequence) -> TwoParticleEntry {
        let (mut b, mut k) = (bra.indices().to_vec(), ket.indices().to_vec());
        assert!(b.len() == 2 && k.len() == 2, "two-particle strings expected");
        b.sort_unstable();
        k.sort_unstable();
        if b == k {
            return if b[0] == b[1] {
                TwoParticleEntry::A
            } else {
                TwoParticleEntry::D
            };
        }
        let shared = b.iter().any(|x| k.contains(x));
        let both_doubled = b[0] == b[1] && k[0] == k[1];
        if shared || both_doubled {
            TwoParticleEntry::B
        } else {
            TwoParticleEntry::C
        }
    }
}

impl FromStr for TwoParticleEntry {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "a" => Ok(TwoParticleEntry::A),
            "b" => Ok(TwoParticleEntry::B),
            "c" => Ok(TwoParticleEntry::C),
            "d" => Ok(TwoParticleEntry::D),
            other => Err(format!("unknown entry kind {other:?}")),
        }
    }
}

/// Closed forms of the two-particle entries for `M` modes.
pub fn two_particle_entry(kind: TwoParticleEntry, modes: usize) -> NuScalar {
    let m = modes as i64;
    let nu = NuScalar::nu();
    let nu2 = nu.pow(2);
    match kind {
        TwoParticleEntry::A => {
            &(&NuScalar::linear(1, m - 1) * &NuScalar::linear(2, m - 1)) - &nu2.scale(&Rat::from(m - 1))
        }
        TwoParticleEntry::B => &(-&nu) - &nu2.scale(&Rat::from(m - 2)),
        TwoParticleEntry::C => nu2.scale(&Rat::from(2)),
        TwoParticleEntry::D => &NuScalar::linear(1, m - 1) * &NuScalar::linear(1, m - 2),
    }
}

/// Known eigenvector families of the one- and two-particle sequence-basis
/// Gram matrices. All representative vectors have integer coordinates.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum EigenFamily {
    /// `B_{0,1}†|0⟩`, eigenvalue 1.
    OneCenterOfMass,
    /// `(a_1† − a_i†)|0⟩`, eigenvalue `1 + Mν`.
    OneRelative,
    /// `[a_i†, a_j†]|0⟩` written over ordered strings, eigenvalue 0.
    TwoAntisymmetric,
    /// `({a_i†, B_{0,1}†} − 2B_{0,2}†)|0⟩`, eigenvalue `2(1 + Mν)`.
    TwoMixed,
    /// `({a_i† − a_1†, B_{0,1}†} − M(a_i†² − a_1†²))|0⟩`, eigenvalue `(1 + Mν)(2 + Mν)`.
    TwoRelativeSquare,
    /// `{a_i† − a_j†, a_k† − a_l†}|0⟩` with distinct indices, eigenvalue
    /// `2(1 + Mν)(1 + ν(M−1))`.
    TwoRelativePair,
    /// All-ones vector `(B_{0,1}†)²|0⟩`, eigenvalue 2 independent of ν.
    TwoCenterOfMass,
}

impl fmt::Display for EigenFamily {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl EigenFamily {
    pub const ALL: [EigenFamily; 7] = [
        EigenFamily::OneCenterOfMass,
        EigenFamily::OneRelative,
        EigenFamily::TwoAntisymmetric,
        EigenFamily::TwoMixed,
        EigenFamily::TwoRelativeSquare,
        EigenFamily::TwoRelativePair,
        EigenFamily::TwoCenterOfMass,
    ];

    pub fn name(&self) -> &'static str {
        match self {
            EigenFamily::OneCenterOfMass => "one-center-of-mass",
            EigenFamily::OneRelative => "one-relative",
            EigenFamily::TwoAntisymmetric => "two-antisymmetric",
            EigenFamily::TwoMixed => "two-mixed",
            EigenFamily::TwoRelativeSquare => "two-relative-square",
            EigenFamily::TwoRelativePair => "two-relative-pair",
            EigenFamily::TwoCenterOfMass => "two-center-of-mass",
        }
    }

    pub fn particles(&self) -> usize {
        match self {
            EigenFamily::OneCenterOfMass | EigenFamily::OneRelative => 1,
            _ => 2,
        }
    }

    /// Families for the given particle number.
    pub fn for_particles(n: usize) -> Vec<EigenFamily> {
        Self::ALL.into_iter().filter(|f| f.particles() == n).collect()
    }

    pub fn min_modes(&self) -> usize {
        match self {
            EigenFamily::OneCenterOfMass | EigenFamily::TwoCenterOfMass => 1,
            EigenFamily::OneRelative | EigenFamily::TwoAntisymmetric | EigenFamily::TwoMixed => 2,
            EigenFamily::TwoRelativeSquare => 3,
            EigenFamily::TwoRelativePair => 4,
        }
    }

    pub fn applies(&self, modes: usize) -> bool {
        modes >= self.min_modes()
    }

    pub fn degeneracy(&self, modes: usize) -> usize {
        if !self.applies(modes) {
            return 0;
        }
        let m = modes;
        match self {
            EigenFamily::OneCenterOfMass | EigenFamily::TwoCenterOfMass => 1,
            EigenFamily::OneRelative | EigenFamily::TwoRelativeSquare => m - 1,
            EigenFamily::TwoAntisymmetric => m * (m - 1) / 2,
            EigenFamily::TwoMixed => m,
            EigenFamily::TwoRelativePair => m * (m - 3) / 2,
        }
    }

    pub fn eigenvalue(&self, modes: usize) -> NuScalar {
        let m = modes as i64;
        let margin = NuScalar::linear(1, m);
        match self {
            EigenFamily::OneCenterOfMass => NuScalar::one(),
            EigenFamily::OneRelative => margin,
            EigenFamily::TwoAntisymmetric => NuScalar::zero(),
            EigenFamily::TwoMixed => margin.scale(&Rat::from(2)),
            EigenFamily::TwoRelativeSquare => &margin * &NuScalar::linear(2, m),
            EigenFamily::TwoRelativePair => {
                (&margin * &NuScalar::linear(1, m - 1)).scale(&Rat::from(2))
            }
            EigenFamily::TwoCenterOfMass => NuScalar::from_int(2),
        }
    }

    /// Representative eigenvectors in the sequence basis (lexicographic order).
    /// They span the whole family; for the pair family the spanning set is
    /// larger than the degeneracy.
    pub fn vectors(&self, modes: usize) -> Vec<Vec<Rat>> {
        let m = modes;
        let one = |i: usize| {
            let mut v = vec![0i64; m];
            v[i] = 1;
            v
        };
        let two_index = |i: usize, j: usize| i * m + j;
        let pair = |i: usize, j: usize| {
            let mut v = vec![0i64; m * m];
            v[two_index(i, j)] += 1;
            v
        };
        let add = |a: &mut Vec<i64>, b: &[i64], s: i64| {
            for (x, y) in a.iter_mut().zip(b) {
                *x += s * y;
            }
        };
        // {a_i†, B_{0,1}†}|0⟩ over ordered strings
        let anti_total = |i: usize| {
            let mut v = vec![0i64; m * m];
            for k in 0..m {
                v[two_index(i, k)] += 1;
                v[two_index(k, i)] += 1;
            }
            v
        };
        let raw: Vec<Vec<i64>> = if !self.applies(m) {
            Vec::new()
        } else {
            match self {
                EigenFamily::OneCenterOfMass => vec![vec![1; m]],
                EigenFamily::OneRelative => (1..m)
                    .map(|i| {
                        let mut v = one(0);
                        add(&mut v, &one(i), -1);
                        v
                    })
                    .collect(),
                EigenFamily::TwoAntisymmetric => {
                    let mut out = Vec::new();
                    for i in 0..m {
                        for j in i + 1..m {
                            let mut v = pair(i, j);
                            add(&mut v, &pair(j, i), -1);
                            out.push(v);
                        }
                    }
                    out
                }
                EigenFamily::TwoMixed => (0..m)
                    .map(|i| {
                        let mut v = anti_total(i);
                        for k in 0..m {
                            v[two_index(k, k)] -= 2;
                        }
                        v
                    })
                    .collect(),
                EigenFamily::TwoRelativeSquare => (1..m)
                    .map(|i| {
                        let mut v = anti_total(i);
                        add(&mut v, &anti_total(0), -1);
                        v[two_index(i, i)] -= m as i64;
                        v[two_index(0, 0)] += m as i64;
                        v
                    })
                    .collect(),
                EigenFamily::TwoRelativePair => {
                    let mut out = Vec::new();
                    for i in 0..m {
                        for j in i + 1..m {
                            for k in 0..m {
                                for l in k + 1..m {
                                    if [k, l].iter().any(|x| *x == i || *x == j) || (k, l) < (i, j) {
                                        continue;
                                    }
                                    let mut v = vec![0i64; m * m];
                                    for (p, sp) in [(i, 1), (j, -1)] {
                                        for (q, sq) in [(k, 1), (l, -1)] {
                                            v[two_index(p, q)] += sp * sq;
                                            v[two_index(q, p)] += sp * sq;
                                        }
                                    }
                                    out.push(v);
                                }
                            }
                        }
                    }
                    out
                }
                EigenFamily::TwoCenterOfMass => vec![vec![1; m * m]],
            }
        };
        raw.into_iter()
            .map(|v| v.into_iter().map(Rat::from).collect())
            .collect()
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct FamilyMismatch {
    pub vector: usize,
    /// 1-based index string of the failing coordinate.
    pub row: Vec<usize>,
    pub lhs: NuScalar,
    pub rhs: NuScalar,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct FamilyCheck {
    pub family: &'static str,
    pub modes: usize,
    pub eigenvalue: NuScalar,
    pub degeneracy: usize,
    pub vectors_checked: usize,
    /// Rank of the representative vectors.
    pub span: usize,
    pub mismatch: Option<FamilyMismatch>,
}

impl FamilyCheck {
    pub fn passed(&self) -> bool {
        self.mismatch.is_none() && self.span == self.degeneracy
    }
}

/// Checks `G·v = λ·v` exactly against a symbolic sequence-basis Gram matrix
/// for every representative vector, and that they span `degeneracy` dimensions.
pub fn verify_eigenfamily_with(
    family: EigenFamily,
    gram: &GramMatrix,
) -> Result<FamilyCheck, GramError> {
    let modes = gram.params().modes();
    if !family.applies(modes)
        || gram.particles() != family.particles()
        || gram.basis_kind() != BasisKind::Sequence
    {
        return Err(GramError::NotApplicable { family, modes });
    }
    let lambda = family.eigenvalue(modes);
    let vectors = family.vectors(modes);
    let mut mismatch = None;
    for (k, v) in vectors.iter().enumerate() {
        let lhs = gram.apply(v);
        if let Some(r) = (0..v.len()).find(|&r| lhs[r] != lambda.scale(&v[r])) {
            mismatch = Some(FamilyMismatch {
                vector: k,
                row: gram.index()[r].one_based(),
                lhs: lhs[r].clone(),
                rhs: lambda.scale(&v[r]),
            });
            break;
        }
    }
    Ok(FamilyCheck {
        family: family.name(),
        modes,
        eigenvalue: lambda,
        degeneracy: family.degeneracy(modes),
        vectors_checked: vectors.len(),
        span: linalg::rank_exact(&vectors),
        mismatch,
    })
}

/// [`verify_eigenfamily_with`] on a freshly built symbolic Gram matrix.
pub fn verify_eigenfamily(
    family: EigenFamily,
    modes: usize,
    guards: &Guards,
) -> Result<FamilyCheck, GramError> {
    let params = AlgebraParams::symbolic(modes)?;
    let gram = build_gram(&params, family.particles(), BasisKind::Sequence, guards)?;
    verify_eigenfamily_with(family, &gram)
}

/// Sum of `degeneracy · eigenvalue` over the families applicable at `M`.
pub fn family_trace(particles: usize, modes: usize) -> NuScalar {
    EigenFamily::for_particles(particles)
        .iter()
        .filter(|f| f.applies(modes))
        .map(|f| f.eigenvalue(modes).scale(&Rat::from(f.degeneracy(modes) as i64)))
        .sum()
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct EntryDeviation {
    pub bra: Vec<usize>,
    pub ket: Vec<usize>,
    pub value: Rat,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CriticalLevel {
    pub particles: usize,
    pub dim: usize,
    /// `k!/M^k`
    pub expected_entry: Rat,
    pub first_deviation: Option<EntryDeviation>,
    pub rank: usize,
    /// Trace of the rank-one matrix, its only nonzero eigenvalue.
    pub eigenvalue: Rat,
    pub expected_eigenvalue: Rat,
}

impl CriticalLevel {
    pub fn passed(&self) -> bool {
        self.first_deviation.is_none() && self.rank == 1 && self.eigenvalue == self.expected_eigenvalue
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CriticalReport {
    pub modes: usize,
    pub nu: Rat,
    pub levels: Vec<CriticalLevel>,
}

impl CriticalReport {
    pub fn passed(&self) -> bool {
        self.levels.iter().all(CriticalLevel::passed)
    }
}

/// At `ν = −1/M`, every k-particle entry should be `k!/M^k`, the matrix rank
/// one and its surviving eigenvalue `k!`, for `k = 1..=kmax`.
pub fn critical_check(modes: usize, kmax: usize, guards: &Guards) -> Result<CriticalReport, GramError> {
    let params = AlgebraParams::symbolic(modes)?;
    let nu = params.critical_nu();
    let params = params.at_value(nu.clone());
    let mut levels = Vec::new();
    for k in 1..=kmax {
        let gram = build_gram(&params, k, BasisKind::Sequence, guards)?;
        let factorial: Rat = (1..=k as i64).map(Rat::from).product();
        let expected_entry = &factorial / &Rat::from(modes as i64).pow(k as i32);
        let entries = gram.rational_entries()?;
        let mut first_deviation = None;
        'scan: for (r, row) in entries.iter().enumerate() {
            for (c, v) in row.iter().enumerate() {
                if *v != expected_entry {
                    first_deviation = Some(EntryDeviation {
                        bra: gram.index()[r].one_based(),
                        ket: gram.index()[c].one_based(),
                        value: v.clone(),
                    });
                    break 'scan;
                }
            }
        }
        let eigenvalue: Rat = (0..entries.len()).map(|i| entries[i][i].clone()).sum();
        levels.push(CriticalLevel {
            particles: k,
            dim: gram.dim(),
            expected_entry,
            first_deviation,
            rank: linalg::rank_exact(&entries),
            eigenvalue,
            expected_eigenvalue: factorial,
        });
    }
    Ok(CriticalReport { modes, nu, levels })
}

/// Arithmetic progression `min, min+step, …` up to and including `max`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct NuGrid {
    pub min: Rat,
    pub max: Rat,
    pub step: Rat,
}

impl Default for NuGrid {
    fn default() -> Self {
        NuGrid {
            min: Rat::new(-3, 5),
            max: Rat::one(),
            step: Rat::new(1, 64),
        }
    }
}

impl NuGrid {
    pub fn points(&self) -> Result<Vec<Rat>, GramError> {
        if !self.step.is_positive() || self.max < self.min {
            return Err(GramError::BadGrid);
        }
        let mut out = Vec::new();
        let mut x = self.min.clone();
        while x <= self.max {
            out.push(x.clone());
            x += &self.step;
        }
        Ok(out)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ScanPoint {
    pub nu: Rat,
    pub report: Result<SpectrumReport, GramError>,
}

/// Spectrum report at every grid point; failures are recorded per point.
pub fn positivity_scan(
    modes: usize,
    particles: usize,
    kind: BasisKind,
    grid: &[Rat],
    guards: &Guards,
    tol: f64,
    max_sweeps: usize,
) -> Result<Vec<ScanPoint>, GramError> {
    let symbolic = build_gram(&AlgebraParams::symbolic(modes)?, particles, kind, guards)?;
    Ok(grid
        .par_iter()
        .map(|nu| ScanPoint {
            nu: nu.clone(),
            report: symbolic
                .evaluate(nu)
                .and_then(|g| g.eigen_numeric(tol, max_sweeps)),
        })
        .collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::NuPoly;

    fn poly(c: &[i64]) -> NuScalar {
        NuScalar::from_poly(NuPoly::from_coeffs(c.iter().map(|&v| Rat::from(v)).collect()))
    }

    fn guards() -> Guards {
        Guards::default()
    }

    #[test]
    fn one_particle_matrix() {
        let g = build_gram(&AlgebraParams::symbolic(3).unwrap(), 1, BasisKind::Sequence, &guards()).unwrap();
        for r in 0..3 {
            for c in 0..3 {
                let expect = if r == c { poly(&[1, 2]) } else { poly(&[0, -1]) };
                assert_eq!(g.entry(r, c), &expect);
            }
        }
    }

    #[test]
    fn entry_lookup_and_classification() {
        let g = build_gram(&AlgebraParams::symbolic(3).unwrap(), 2, BasisKind::Sequence, &guards()).unwrap();
        let s = |v: &[usize]| ModeSequence::from_one_based(v);
        for bra in g.index() {
            for ket in g.index() {
                let kind = TwoParticleEntry::classify(bra, ket);
                assert_eq!(g.entry_for(bra, ket).unwrap(), &two_particle_entry(kind, 3));
            }
        }
        assert_eq!(TwoParticleEntry::classify(&s(&[1, 1]), &s(&[1, 2])), TwoParticleEntry::B);
        assert_eq!(TwoParticleEntry::classify(&s(&[1, 1]), &s(&[2, 3])), TwoParticleEntry::C);
        assert!(g.entry_for(&s(&[1]), &s(&[1, 2])).is_none());
        assert!(g.entry_for(&s(&[1, 4]), &s(&[1, 2])).is_none());
    }

    #[test]
    fn free_boson_diagonal() {
        let p = AlgebraParams::at(3, Rat::zero()).unwrap();
        let g = build_gram(&p, 2, BasisKind::Multiset, &guards()).unwrap();
        for (r, o) in g.classes().iter().enumerate() {
            for c in 0..g.dim() {
                let expect = if r == c { o.factorial_product() } else { Rat::zero() };
                assert_eq!(g.entry(r, c).as_rat().unwrap(), expect);
            }
        }
    }

    #[test]
    fn ranks() {
        let at = |m: usize, n: usize, nu: Rat| {
            build_gram(&AlgebraParams::at(m, nu).unwrap(), n, BasisKind::Sequence, &guards())
                .unwrap()
                .rank_exact()
                .unwrap()
        };
        assert_eq!(at(3, 2, Rat::new(-1, 3)), 1);
        assert_eq!(at(2, 2, Rat::zero()), 3);
        assert_eq!(at(2, 1, Rat::one()), 2);
        let sym = build_gram(&AlgebraParams::symbolic(2).unwrap(), 1, BasisKind::Sequence, &guards()).unwrap();
        assert_eq!(sym.rank_exact(), Err(GramError::Symbolic));
    }

    #[test]
    fn spectra() {
        let spectrum = |m: usize, n: usize, nu: Rat| {
            build_gram(&AlgebraParams::at(m, nu).unwrap(), n, BasisKind::Sequence, &guards())
                .unwrap()
                .eigen_numeric(DEFAULT_EIGEN_TOL, DEFAULT_MAX_SWEEPS)
                .unwrap()
        };
        let close = |a: &[f64], b: &[f64]| a.len() == b.len() && a.iter().zip(b).all(|(x, y)| (x - y).abs() < 1e-9);
        let r = spectrum(2, 2, Rat::one());
        assert!(close(&r.eigenvalues, &[0.0, 2.0, 6.0, 6.0]), "{:?}", r.eigenvalues);
        assert!(r.positivity);
        let r = spectrum(3, 1, Rat::one());
        assert!(close(&r.eigenvalues, &[1.0, 4.0, 4.0]));
        let r = spectrum(2, 1, Rat::new(-1, 2));
        assert!(close(&r.eigenvalues, &[0.0, 1.0]));
        assert_eq!((r.rank, r.near_zero, r.positivity), (1, 1, false));
    }

    #[test]
    fn families_hold_symbolically() {
        for m in 1..=5 {
            for f in EigenFamily::ALL.iter().filter(|f| f.applies(m)) {
                let check = verify_eigenfamily(*f, m, &guards()).unwrap();
                assert!(check.passed(), "{f} at M={m}: {check:?}");
            }
        }
        assert!(matches!(
            verify_eigenfamily(EigenFamily::TwoRelativePair, 3, &guards()),
            Err(GramError::NotApplicable { .. })
        ));
    }

    #[test]
    fn wrong_eigenvalue_is_reported() {
        let g = build_gram(&AlgebraParams::symbolic(3).unwrap(), 1, BasisKind::Sequence, &guards()).unwrap();
        let v = vec![Rat::one(), Rat::from(-1), Rat::zero()];
        let lhs = g.apply(&v);
        assert_eq!(lhs[0], poly(&[1, 3]));
        assert_ne!(lhs[0], poly(&[1, 2]));
    }

    #[test]
    fn critical_point() {
        let r = critical_check(2, 2, &guards()).unwrap();
        assert!(r.passed());
        assert_eq!(r.levels[1].expected_entry, Rat::new(1, 2));
        assert_eq!(r.levels[1].eigenvalue, Rat::from(2));
        assert_eq!(r.levels[0].eigenvalue, Rat::one());
        let r = critical_check(3, 2, &guards()).unwrap();
        assert_eq!(r.levels[1].expected_entry, Rat::new(2, 9));
        assert!(r.passed());
    }

    #[test]
    fn scan_points() {
        let grid = NuGrid {
            min: Rat::new(-1, 2),
            max: Rat::new(1, 2),
            step: Rat::new(1, 6),
        };
        let pts = grid.points().unwrap();
        assert_eq!(pts.len(), 7);
        let scan = positivity_scan(3, 2, BasisKind::Sequence, &pts, &guards(), 1e-10, 100).unwrap();
        for p in &scan {
            let r = p.report.as_ref().unwrap();
            assert_eq!(r.positivity, p.nu > Rat::new(-1, 3), "nu={}", p.nu);
        }
        let at_crit = scan.iter().find(|p| p.nu == Rat::new(-1, 3)).unwrap();
        assert_eq!(at_crit.report.as_ref().unwrap().rank, 1);
        let below = &scan[0].report.as_ref().unwrap();
        assert!(below.min_eigenvalue < -0.5);
        assert!(NuGrid { step: Rat::zero(), ..grid }.points().is_err());
    }

    #[test]
    fn json_layout() {
        let g = build_gram(&AlgebraParams::symbolic(2).unwrap(), 1, BasisKind::Sequence, &guards()).unwrap();
        let v = serde_json::to_value(&g).unwrap();
        assert_eq!(v["modes"], 2);
        assert_eq!(v["nu"], "symbolic");
        assert_eq!(v["basis"]["kind"], "sequence");
        assert_eq!(v["basis"]["index_strings"], serde_json::json!([[1], [2]]));
        assert_eq!(v["entries"][0][1]["num"], serde_json::json!(["0", "-1"]));
    }
}
