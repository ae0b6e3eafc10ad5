//! Single-mode deformed oscillator with `a†a = φ(N)`, `aa† = φ(N+1)`.
//!
//! The built-in structure function is the Calogero–Vasiliev one,
//! `φ(n) = n + ν(1 + (−1)^{n+1})`, i.e. `n` for even and `n + 2ν` for odd `n`.
//! Any other algebra can be supplied as a table of `φ(1), φ(2), …`.
//!
//! The normally ordered series for `aa†`, `K`, `N` and the map to Bose
//! operators are obtained by solving the triangular systems that make the
//! truncated series act correctly on `a†^n|0⟩`, using
//! `a^k a†^n|0⟩ = φ(n)φ(n−1)⋯φ(n−k+1) a†^{n−k}|0⟩`.
//!
//! The `aa†` series `1 + Σ α_k a†^k a^k` can only match on `n ≥ 1`: on the
//! vacuum it gives `1` while `aa†|0⟩ = φ(1)|0⟩`.

use std::fmt;
use std::str::FromStr;

use dashu_float::ops::SquareRoot;
use serde::{Serialize, Serializer};
use thiserror::Error;

use crate::fock::Coupling;
use crate::scalar::{Float, NuScalar, Rat};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SingleModeError {
    #[error("phi({0}) vanishes")]
    ZeroPhi(usize),
    #[error("phi({n}) is not tabulated (table has {len} entries)")]
    PhiOutOfRange { n: usize, len: usize },
    #[error("phi({0}) must be a number for the Bose mapping")]
    NotNumeric(usize),
    #[error("phi({n})/{n} is negative; the Bose mapping needs its square root")]
    NegativeRatio { n: usize },
}

#[derive(Debug, Clone, PartialEq)]
enum PhiRule {
    Calogero,
    /// `φ(1), φ(2), …`
    Table(Vec<NuScalar>),
}

#[derive(Debug, Clone, PartialEq)]
pub struct SingleModeAlgebra {
    nu: NuScalar,
    rule: PhiRule,
}

impl SingleModeAlgebra {
    pub fn calogero(coupling: &Coupling) -> Self {
        SingleModeAlgebra {
            nu: coupling.to_scalar(),
            rule: PhiRule::Calogero,
        }
    }

    pub fn calogero_symbolic() -> Self {
        Self::calogero(&Coupling::Symbolic)
    }

    pub fn calogero_at(nu: Rat) -> Self {
        Self::calogero(&Coupling::Value(nu))
    }

    /// General algebra given by `φ(1), φ(2), …`; `φ(0) = 0` is implied.
    pub fn from_table(phi: Vec<NuScalar>) -> Self {
        SingleModeAlgebra {
            nu: NuScalar::zero(),
            rule: PhiRule::Table(phi),
        }
    }

    pub fn phi(&self, n: usize) -> Result<NuScalar, SingleModeError> {
        if n == 0 {
            return Ok(NuScalar::zero());
        }
        match &self.rule {
            PhiRule::Calogero => {
                let base = NuScalar::from_int(n as i64);
                Ok(if n % 2 == 1 {
                    &base + &self.nu.scale(&Rat::from(2))
                } else {
                    base
                })
            }
            PhiRule::Table(t) => t.get(n - 1).cloned().ok_or(SingleModeError::PhiOutOfRange {
                n,
                len: t.len(),
            }),
        }
    }

    /// `G(n) = φ(n+1) − φ(n)`, the right-hand side of `aa† − a†a = G(N)`.
    pub fn structure_function(&self, n: usize) -> Result<NuScalar, SingleModeError> {
        Ok(&self.phi(n + 1)? - &self.phi(n)?)
    }

    /// `φ(n)φ(n−1)⋯φ(n−k+1)`, the coefficient of `a^k a†^n|0⟩`.
    pub fn falling(&self, n: usize, k: usize) -> Result<NuScalar, SingleModeError> {
        if k > n {
            return Ok(NuScalar::zero());
        }
        let mut acc = NuScalar::one();
        for j in (n - k + 1..=n).rev() {
            acc = &acc * &self.phi(j)?;
        }
        Ok(acc)
    }

    /// `[φ(n)]! = φ(1)⋯φ(n)`.
    pub fn phi_factorial(&self, n: usize) -> Result<NuScalar, SingleModeError> {
        self.falling(n, n)
    }

    /// `⟨0|a^m a†^n|0⟩ = [φ(n)]! δ_mn`.
    pub fn single_gram(&self, m: usize, n: usize) -> Result<NuScalar, SingleModeError> {
        if m != n {
            return Ok(NuScalar::zero());
        }
        self.phi_factorial(n)
    }

    fn check_nonzero(&self, upto: usize) -> Result<(), SingleModeError> {
        for k in 1..=upto {
            if self.phi(k)?.is_zero() {
                return Err(SingleModeError::ZeroPhi(k));
            }
        }
        Ok(())
    }

    /// Coefficient of `ã a†^n|0⟩ = c a†^{n−1}|0⟩`, where `ã = a N/φ(N)`.
    pub fn dual_action(&self, n: usize) -> Result<NuScalar, SingleModeError> {
        if n == 0 {
            return Ok(NuScalar::zero());
        }
        self.check_nonzero(n)?;
        let phi = self.phi(n)?;
        Ok(&NuScalar::from_int(n as i64).checked_div(&phi).expect("checked nonzero") * &phi)
    }

    /// Whether `φ(n) > 0` for all `1 ≤ n ≤ nmax`; `None` when some value is symbolic.
    pub fn phi_positive(&self, nmax: usize) -> Result<Option<bool>, SingleModeError> {
        let mut all = true;
        for n in 1..=nmax {
            match self.phi(n)?.as_rat() {
                Some(v) => all &= v.is_positive(),
                None => return Ok(None),
            }
        }
        Ok(Some(all))
    }

    /// First `terms` coefficients of the requested series.
    ///
    /// `alpha`, `beta`, `gamma` are indexed from `k = 1`; `c` from `k = 0`.
    pub fn series(
        &self,
        kind: SeriesKind,
        terms: usize,
        precision: usize,
    ) -> Result<CoefficientSeries, SingleModeError> {
        let values = match kind {
            SeriesKind::Alpha => SeriesValues::Exact(self.solve_normal_ordered(terms, |n| {
                Ok(&self.phi(n + 1)? - &NuScalar::one())
            })?),
            SeriesKind::Beta => SeriesValues::Exact(self.solve_normal_ordered(terms, |n| {
                Ok(NuScalar::from_int(if n % 2 == 0 { 0 } else { -2 }))
            })?),
            SeriesKind::Gamma => SeriesValues::Exact(
                self.solve_normal_ordered(terms, |n| Ok(NuScalar::from_int(n as i64)))?,
            ),
            SeriesKind::C => SeriesValues::Numeric {
                precision,
                values: self.bose_map_coefficients(terms, precision)?,
            },
        };
        Ok(CoefficientSeries { kind, values })
    }

    /// Solves `target(n) = Σ_{k=1}^{n} x_k φ(n)⋯φ(n−k+1)` for `n = 1..=terms`.
    fn solve_normal_ordered(
        &self,
        terms: usize,
        target: impl Fn(usize) -> Result<NuScalar, SingleModeError>,
    ) -> Result<Vec<NuScalar>, SingleModeError> {
        self.check_nonzero(terms)?;
        let mut x: Vec<NuScalar> = Vec::with_capacity(terms);
        for n in 1..=terms {
            let mut rest = target(n)?;
            for (k, xk) in x.iter().enumerate() {
                rest = &rest - &(xk * &self.falling(n, k + 1)?);
            }
            let diag = self.phi_factorial(n)?;
            x.push(rest.checked_div(&diag).expect("checked nonzero"));
        }
        Ok(x)
    }

    /// `√(φ(m+1)/(m+1))` at working precision.
    pub fn bose_ratio_sqrt(&self, m: usize, precision: usize) -> Result<Float, SingleModeError> {
        let phi = self
            .phi(m + 1)?
            .as_rat()
            .ok_or(SingleModeError::NotNumeric(m + 1))?;
        let ratio = &phi / &Rat::from((m + 1) as i64);
        if ratio.is_negative() {
            return Err(SingleModeError::NegativeRatio { n: m + 1 });
        }
        Ok(ratio.to_float(precision).sqrt())
    }

    /// `c_0 … c_{terms−1}` of `a = (Σ c_k b†^k b^k) b`, from
    /// `√(φ(m+1)/(m+1)) = Σ_{k≤m} c_k m!/(m−k)!`.
    fn bose_map_coefficients(
        &self,
        terms: usize,
        precision: usize,
    ) -> Result<Vec<Float>, SingleModeError> {
        let mut c: Vec<Float> = Vec::with_capacity(terms);
        for m in 0..terms {
            let mut rest = self.bose_ratio_sqrt(m, precision)?;
            for (k, ck) in c.iter().enumerate() {
                rest -= ck * falling_factorial(m, k).to_float(precision);
            }
            c.push(rest / falling_factorial(m, m).to_float(precision));
        }
        Ok(c)
    }
}

/// `m!/(m−k)!`.
pub fn falling_factorial(m: usize, k: usize) -> Rat {
    (m - k + 1..=m).map(|j| Rat::from(j as i64)).product()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum SeriesKind {
    /// `aa† = 1 + Σ_{k≥1} α_k a†^k a^k`
    Alpha,
    /// `K = 1 + Σ_{k≥1} β_k a†^k a^k`
    Beta,
    /// `N = Σ_{k≥1} γ_k a†^k a^k`
    Gamma,
    /// `a = (Σ_{k≥0} c_k b†^k b^k) b` with Bose `b`
    C,
}

impl FromStr for SeriesKind {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "alpha" => Ok(SeriesKind::Alpha),
            "beta" => Ok(SeriesKind::Beta),
            "gamma" => Ok(SeriesKind::Gamma),
            "c" => Ok(SeriesKind::C),
            other => Err(format!("unknown series {other:?}")),
        }
    }
}

impl fmt::Display for SeriesKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            SeriesKind::Alpha => "alpha",
            SeriesKind::Beta => "beta",
            SeriesKind::Gamma => "gamma",
            SeriesKind::C => "c",
        })
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum SeriesValues {
    Exact(Vec<NuScalar>),
    Numeric { precision: usize, values: Vec<Float> },
}

#[derive(Debug, Clone, PartialEq)]
pub struct CoefficientSeries {
    pub kind: SeriesKind,
    pub values: SeriesValues,
}

impl CoefficientSeries {
    pub fn len(&self) -> usize {
        match &self.values {
            SeriesValues::Exact(v) => v.len(),
            SeriesValues::Numeric { values, .. } => values.len(),
        }
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn exact(&self) -> Option<&[NuScalar]> {
        match &self.values {
            SeriesValues::Exact(v) => Some(v),
            SeriesValues::Numeric { .. } => None,
        }
    }

    pub fn numeric(&self) -> Option<&[Float]> {
        match &self.values {
            SeriesValues::Numeric { values, .. } => Some(values),
            SeriesValues::Exact(_) => None,
        }
    }

    /// Index of the first coefficient.
    pub fn first_index(&self) -> usize {
        match self.kind {
            SeriesKind::C => 0,
            _ => 1,
        }
    }
}

pub fn float_to_decimal(x: &Float) -> String {
    x.to_decimal().value().to_string()
}

impl Serialize for CoefficientSeries {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        use serde::ser::SerializeStruct;
        let mut st = serializer.serialize_struct("CoefficientSeries", 4)?;
        st.serialize_field("kind", &self.kind.to_string())?;
        st.serialize_field("first_index", &self.first_index())?;
        match &self.values {
            SeriesValues::Exact(v) => {
                st.serialize_field("precision_bits", &Option::<usize>::None)?;
                st.serialize_field("values", v)?;
            }
            SeriesValues::Numeric { precision, values } => {
                st.serialize_field("precision_bits", &Some(precision))?;
                let dec: Vec<String> = values.iter().map(float_to_decimal).collect();
                st.serialize_field("values", &dec)?;
            }
        }
        st.end()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::NuPoly;

    fn nu_poly(c: &[i64]) -> NuScalar {
        NuScalar::from_poly(NuPoly::from_coeffs(c.iter().map(|&v| Rat::from(v)).collect()))
    }

    fn ratio(n: &[i64], d: &[i64]) -> NuScalar {
        nu_poly(n).checked_div(&nu_poly(d)).unwrap()
    }

    #[test]
    fn phi_values() {
        let alg = SingleModeAlgebra::calogero_symbolic();
        assert_eq!(alg.phi(1).unwrap(), NuScalar::linear(1, 2));
        assert_eq!(alg.phi(2).unwrap(), NuScalar::from_int(2));
        assert!(alg.phi(0).unwrap().is_zero());
        assert_eq!(alg.structure_function(0).unwrap(), NuScalar::linear(1, 2));
        assert_eq!(alg.structure_function(1).unwrap(), NuScalar::linear(1, -2));
    }

    #[test]
    fn low_order_series() {
        let alg = SingleModeAlgebra::calogero_symbolic();
        let one_2nu_sq = [1, 4, 4];
        let alpha = alg.series(SeriesKind::Alpha, 2, 0).unwrap();
        assert_eq!(
            alpha.exact().unwrap(),
            &[ratio(&[1], &[1, 2]), ratio(&[0, 3, 2], &one_2nu_sq)]
        );
        let beta = alg.series(SeriesKind::Beta, 2, 0).unwrap();
        assert_eq!(beta.exact().unwrap(), &[ratio(&[-2], &[1, 2]), ratio(&[2], &one_2nu_sq)]);
        let gamma = alg.series(SeriesKind::Gamma, 2, 0).unwrap();
        assert_eq!(gamma.exact().unwrap(), &[ratio(&[1], &[1, 2]), ratio(&[0, 2], &one_2nu_sq)]);
    }

    #[test]
    fn alpha_matches_printed_recursion() {
        // α_k = (φ(k+1) − 1 − Σ_{m<k} α_m φ(k)⋯φ(k+1−m)) / [φ(k)]!
        let alg = SingleModeAlgebra::calogero_symbolic();
        let alpha = alg.series(SeriesKind::Alpha, 6, 0).unwrap();
        let a = alpha.exact().unwrap();
        for k in 1..=6 {
            let mut num = &alg.phi(k + 1).unwrap() - &NuScalar::one();
            for m in 1..k {
                num = &num - &(&a[m - 1] * &alg.falling(k, m).unwrap());
            }
            assert_eq!(a[k - 1], num.checked_div(&alg.phi_factorial(k).unwrap()).unwrap());
        }
    }

    #[test]
    fn zero_phi_reported() {
        let alg = SingleModeAlgebra::calogero_at(Rat::new(-1, 2));
        assert_eq!(alg.series(SeriesKind::Alpha, 3, 0), Err(SingleModeError::ZeroPhi(1)));
        let alg = SingleModeAlgebra::calogero_at(Rat::new(-3, 2));
        assert_eq!(alg.series(SeriesKind::Gamma, 4, 0), Err(SingleModeError::ZeroPhi(3)));
        assert_eq!(alg.dual_action(3), Err(SingleModeError::ZeroPhi(3)));
    }

    #[test]
    fn gram_and_dual() {
        let alg = SingleModeAlgebra::calogero_symbolic();
        assert_eq!(alg.single_gram(2, 2).unwrap(), nu_poly(&[2, 4]));
        assert!(alg.single_gram(1, 2).unwrap().is_zero());
        assert_eq!(alg.single_gram(3, 3).unwrap(), nu_poly(&[6, 16, 8]));
        assert_eq!(alg.dual_action(3).unwrap(), NuScalar::from_int(3));
        assert!(alg.dual_action(0).unwrap().is_zero());
        let two = &alg.dual_action(2).unwrap() * &alg.dual_action(1).unwrap();
        assert_eq!(two, NuScalar::from_int(2));
    }

    #[test]
    fn table_algebra() {
        // q-free Bose table φ(n) = n gives the undeformed series.
        let alg = SingleModeAlgebra::from_table((1..=5).map(NuScalar::from_int).collect());
        let alpha = alg.series(SeriesKind::Alpha, 4, 0).unwrap();
        let a = alpha.exact().unwrap();
        assert!(a[0].is_one() && a[1..].iter().all(NuScalar::is_zero));
        assert_eq!(
            alg.series(SeriesKind::Alpha, 5, 0),
            Err(SingleModeError::PhiOutOfRange { n: 6, len: 5 })
        );
    }

    #[test]
    fn c_series_closed_form() {
        // c_k = (1/k!) Σ_{m=0}^{k} (−1)^m C(k,m) √(φ(k−m+1)/(k−m+1))
        let prec = 160;
        let alg = SingleModeAlgebra::calogero_at(Rat::new(1, 2));
        let c = alg.series(SeriesKind::C, 6, prec).unwrap();
        for (k, ck) in c.numeric().unwrap().iter().enumerate() {
            let mut sum = Rat::zero().to_float(prec);
            for m in 0..=k {
                let binom = &falling_factorial(k, m) / &falling_factorial(m, m);
                let term = alg.bose_ratio_sqrt(k - m, prec).unwrap() * binom.to_float(prec);
                if m % 2 == 0 {
                    sum += term;
                } else {
                    sum -= term;
                }
            }
            let closed = sum / falling_factorial(k, k).to_float(prec);
            let diff = (ck - &closed).to_f64().value().abs();
            assert!(diff < 1e-40, "k={k}: {diff}");
        }
        // At ν = 0 the map is the identity.
        let free = SingleModeAlgebra::calogero_at(Rat::zero());
        let c = free.series(SeriesKind::C, 4, 128).unwrap();
        let v: Vec<f64> = c.numeric().unwrap().iter().map(|x| x.to_f64().value()).collect();
        assert_eq!(v, vec![1.0, 0.0, 0.0, 0.0]);
    }

    #[test]
    fn c_series_needs_numbers() {
        let alg = SingleModeAlgebra::calogero_symbolic();
        assert_eq!(alg.series(SeriesKind::C, 2, 128), Err(SingleModeError::NotNumeric(1)));
        let alg = SingleModeAlgebra::calogero_at(Rat::new(-3, 4));
        assert_eq!(
            alg.series(SeriesKind::C, 2, 128),
            Err(SingleModeError::NegativeRatio { n: 1 })
        );
    }

    #[test]
    fn json_shape() {
        let alg = SingleModeAlgebra::calogero_at(Rat::zero());
        let c = alg.series(SeriesKind::C, 2, 64).unwrap();
        let v = serde_json::to_value(&c).unwrap();
        assert_eq!(v["kind"], "c");
        assert_eq!(v["first_index"], 0);
        assert_eq!(v["values"][0], "1");
        let g = alg.series(SeriesKind::Gamma, 1, 0).unwrap();
        let v = serde_json::to_value(&g).unwrap();
        assert_eq!(v["values"][0]["num"][0], "1");
    }
}
