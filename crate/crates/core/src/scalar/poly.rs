use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use super::Rat;

/// Univariate polynomial in the coupling ν with exact rational coefficients.
///
/// Coefficients are stored in ascending powers with no trailing zeros, so the
/// zero polynomial has an empty coefficient list.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Default, Serialize, Deserialize)]
#[serde(from = "Vec<Rat>", into = "Vec<Rat>")]
pub struct NuPoly {
    coeffs: Vec<Rat>,
}

impl NuPoly {
    pub fn from_coeffs(mut coeffs: Vec<Rat>) -> Self {
        while coeffs.last().is_some_and(Rat::is_zero) {
            coeffs.pop();
        }
        NuPoly { coeffs }
    }

    pub fn zero() -> Self {
        NuPoly { coeffs: Vec::new() }
    }

    pub fn one() -> Self {
        Self::constant(Rat::one())
    }

    pub fn constant(value: Rat) -> Self {
        Self::from_coeffs(vec![value])
    }

    /// The indeterminate ν.
    pub fn nu() -> Self {
        NuPoly {
            coeffs: vec![Rat::zero(), Rat::one()],
        }
    }

    /// `a + b ν`.
    pub fn linear(a: Rat, b: Rat) -> Self {
        Self::from_coeffs(vec![a, b])
    }

    pub fn coeffs(&self) -> &[Rat] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.coeffs.len() == 1 && self.coeffs[0].is_one()
    }

    /// `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn is_constant(&self) -> bool {
        self.coeffs.len() <= 1
    }

    pub fn as_constant(&self) -> Option<Rat> {
        match self.coeffs.len() {
            0 => Some(Rat::zero()),
            1 => Some(self.coeffs[0].clone()),
            _ => None,
        }
    }

    pub fn leading(&self) -> Option<&Rat> {
        self.coeffs.last()
    }

    pub fn eval(&self, x: &Rat) -> Rat {
        self.coeffs
            .iter()
            .rev()
            .fold(Rat::zero(), |acc, c| acc * x + c)
    }

    pub fn scale(&self, factor: &Rat) -> NuPoly {
        if factor.is_zero() {
            return NuPoly::zero();
        }
        NuPoly {
            coeffs: self.coeffs.iter().map(|c| c * factor).collect(),
        }
    }

    pub fn pow(&self, exp: u32) -> NuPoly {
        (0..exp).fold(NuPoly::one(), |acc, _| &acc * self)
    }

    /// Euclidean division. Panics if `divisor` is zero.
    pub fn div_rem(&self, divisor: &NuPoly) -> (NuPoly, NuPoly) {
        let lead = divisor.leading().expect("polynomial division by zero");
        let dd = divisor.coeffs.len() - 1;
        let mut rem = self.coeffs.clone();
        if rem.len() <= dd {
            return (NuPoly::zero(), self.clone());
        }
        let mut quot = vec![Rat::zero(); rem.len() - dd];
        for k in (0..quot.len()).rev() {
            let top = &rem[k + dd];
            if top.is_zero() {
                continue;
            }
            let q = top / lead;
            for (j, d) in divisor.coeffs.iter().enumerate() {
                let t = &q * d;
                rem[k + j] -= &t;
            }
            quot[k] = q;
        }
        (NuPoly::from_coeffs(quot), NuPoly::from_coeffs(rem))
    }

    pub fn monic(&self) -> NuPoly {
        match self.leading() {
            None => NuPoly::zero(),
            Some(lead) => self.scale(&lead.recip().expect("nonzero leading coefficient")),
        }
    }

    /// Monic greatest common divisor (zero only when both inputs are zero).
    pub fn gcd(&self, other: &NuPoly) -> NuPoly {
        let mut a = self.monic();
        let mut b = other.monic();
        while !b.is_zero() {
            let (_, r) = a.div_rem(&b);
            a = b;
            b = r.monic();
        }
        a
    }

    /// Positive rational `c` such that `self / c` has coprime integer coefficients.
    pub fn content(&self) -> Rat {
        if self.is_zero() {
            return Rat::one();
        }
        let mut num_gcd = BigInt::zero();
        let mut den_lcm = BigInt::one();
        for c in &self.coeffs {
            num_gcd = num_gcd.gcd(c.numer());
            den_lcm = den_lcm.lcm(c.denom());
        }
        Rat::new(num_gcd, den_lcm)
    }

    /// Integer coefficients after clearing denominators (same roots as `self`).
    pub fn integer_coeffs(&self) -> Vec<BigInt> {
        let c = self.content();
        self.coeffs
            .iter()
            .map(|x| {
                let y = x / &c;
                debug_assert!(y.is_integer());
                y.numer().clone()
            })
            .collect()
    }

    /// Distinct rational roots in ascending order.
    ///
    /// Uses the rational root test; candidate enumeration is limited to
    /// coefficients that fit in `u64`, beyond which only the root at zero is
    /// reported.
    pub fn rational_roots(&self) -> Vec<Rat> {
        let mut roots = Vec::new();
        if self.degree().unwrap_or(0) == 0 {
            return roots;
        }
        let mut ints = self.integer_coeffs();
        let zeros = ints.iter().take_while(|c| c.is_zero()).count();
        if zeros > 0 {
            roots.push(Rat::zero());
            ints.drain(..zeros);
        }
        if ints.len() > 1 {
            let (Some(lo), Some(hi)) = (
                ints[0].abs().to_u64(),
                ints.last().expect("nonempty").abs().to_u64(),
            ) else {
                return roots;
            };
            let reduced = NuPoly::from_coeffs(ints.into_iter().map(Rat::from_integer).collect());
            for p in divisors(lo) {
                for q in divisors(hi) {
                    for sign in [1i64, -1] {
                        let cand = Rat::new(BigInt::from(p) * sign, BigInt::from(q));
                        if reduced.eval(&cand).is_zero() && !roots.contains(&cand) {
                            roots.push(cand);
                        }
                    }
                }
            }
        }
        roots.sort();
        roots
    }
}

fn divisors(n: u64) -> Vec<u64> {
    let mut small = Vec::new();
    let mut large = Vec::new();
    let mut d = 1u64;
    while d.saturating_mul(d) <= n {
        if n.is_multiple_of(d) {
            small.push(d);
            if d != n / d {
                large.push(n / d);
            }
        }
        d += 1;
    }
    small.extend(large.into_iter().rev());
    small
}

impl From<Vec<Rat>> for NuPoly {
    fn from(coeffs: Vec<Rat>) -> Self {
        NuPoly::from_coeffs(coeffs)
    }
}

impl From<NuPoly> for Vec<Rat> {
    fn from(p: NuPoly) -> Self {
        p.coeffs
    }
}

impl From<Rat> for NuPoly {
    fn from(value: Rat) -> Self {
        NuPoly::constant(value)
    }
}

impl Add for &NuPoly {
    type Output = NuPoly;
    fn add(self, rhs: &NuPoly) -> NuPoly {
        let (long, short) = if self.coeffs.len() >= rhs.coeffs.len() {
            (self, rhs)
        } else {
            (rhs, self)
        };
        let mut coeffs = long.coeffs.clone();
        for (c, s) in coeffs.iter_mut().zip(&short.coeffs) {
            *c += s;
        }
        NuPoly::from_coeffs(coeffs)
    }
}

impl Neg for &NuPoly {
    type Output = NuPoly;
    fn neg(self) -> NuPoly {
        NuPoly {
            coeffs: self.coeffs.iter().map(|c| -c).collect(),
        }
    }
}

impl Sub for &NuPoly {
    type Output = NuPoly;
    fn sub(self, rhs: &NuPoly) -> NuPoly {
        self + &(-rhs)
    }
}

impl Mul for &NuPoly {
    type Output = NuPoly;
    fn mul(self, rhs: &NuPoly) -> NuPoly {
        if self.is_zero() || rhs.is_zero() {
            return NuPoly::zero();
        }
        let mut coeffs = vec![Rat::zero(); self.coeffs.len() + rhs.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in rhs.coeffs.iter().enumerate() {
                coeffs[i + j] += &(a * b);
            }
        }
        NuPoly::from_coeffs(coeffs)
    }
}

impl fmt::Display for NuPoly {
    /// Human-readable form, e.g. `2 + 3nu - nu^2`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (power, c) in self.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let magnitude = c.abs();
            if first {
                if c.is_negative() {
                    write!(f, "-")?;
                }
            } else {
                write!(f, " {} ", if c.is_negative() { '-' } else { '+' })?;
            }
            first = false;
            let show_coeff = power == 0 || !magnitude.is_one();
            if show_coeff {
                if magnitude.is_integer() {
                    write!(f, "{magnitude}")?;
                } else {
                    write!(f, "({magnitude})")?;
                }
            }
            match power {
                0 => {}
                1 => write!(f, "nu")?,
                _ => write!(f, "nu^{power}")?,
            }
        }
        Ok(())
    }
}

impl fmt::Debug for NuPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "NuPoly({self})")
    }
}
