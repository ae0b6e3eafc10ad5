use std::fmt;
use std::ops::{Add, AddAssign, Div, Mul, Neg, Sub};

use serde::{Deserialize, Serialize};

use super::{NuPoly, Rat, ScalarError};

/// Rational function of the coupling ν, kept in canonical form.
///
/// Canonical form: numerator and denominator are coprime, and the denominator
/// has coprime integer coefficients with a positive leading coefficient. A
/// polynomial value therefore always has denominator `1`, and two equal
/// rational functions have identical representations.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(try_from = "RawNuScalar", into = "RawNuScalar")]
pub struct NuScalar {
    num: NuPoly,
    den: NuPoly,
}

#[derive(Serialize, Deserialize)]
struct RawNuScalar {
    num: NuPoly,
    den: NuPoly,
}

impl TryFrom<RawNuScalar> for NuScalar {
    type Error = ScalarError;
    fn try_from(raw: RawNuScalar) -> Result<Self, Self::Error> {
        NuScalar::new(raw.num, raw.den)
    }
}

impl From<NuScalar> for RawNuScalar {
    fn from(s: NuScalar) -> Self {
        RawNuScalar {
            num: s.num,
            den: s.den,
        }
    }
}

impl NuScalar {
    pub fn new(num: NuPoly, den: NuPoly) -> Result<Self, ScalarError> {
        if den.is_zero() {
            return Err(ScalarError::DivideByZero);
        }
        Ok(Self::canonical(num, den))
    }

    fn canonical(num: NuPoly, den: NuPoly) -> Self {
        if num.is_zero() {
            return Self::zero();
        }
        if let Some(d) = den.as_constant() {
            return NuScalar {
                num: num.scale(&d.recip().expect("nonzero denominator")),
                den: NuPoly::one(),
            };
        }
        let g = num.gcd(&den);
        let (num, den) = if g.is_one() {
            (num, den)
        } else {
            (num.div_rem(&g).0, den.div_rem(&g).0)
        };
        let mut norm = den.content();
        if den.leading().expect("nonzero").is_negative() {
            norm = -norm;
        }
        let inv = norm.recip().expect("nonzero content");
        NuScalar {
            num: num.scale(&inv),
            den: den.scale(&inv),
        }
    }

    pub fn zero() -> Self {
        NuScalar {
            num: NuPoly::zero(),
            den: NuPoly::one(),
        }
    }

    pub fn one() -> Self {
        Self::from_rat(Rat::one())
    }

    /// The indeterminate ν.
    pub fn nu() -> Self {
        Self::from_poly(NuPoly::nu())
    }

    pub fn from_rat(value: Rat) -> Self {
        Self::from_poly(NuPoly::constant(value))
    }

    pub fn from_int(value: i64) -> Self {
        Self::from_rat(Rat::from(value))
    }

    pub fn from_poly(poly: NuPoly) -> Self {
        NuScalar {
            num: poly,
            den: NuPoly::one(),
        }
    }

    /// `a + b ν`.
    pub fn linear(a: i64, b: i64) -> Self {
        Self::from_poly(NuPoly::linear(Rat::from(a), Rat::from(b)))
    }

    pub fn numer(&self) -> &NuPoly {
        &self.num
    }

    pub fn denom(&self) -> &NuPoly {
        &self.den
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    pub fn is_one(&self) -> bool {
        self.num.is_one() && self.den.is_one()
    }

    pub fn is_polynomial(&self) -> bool {
        self.den.is_one()
    }

    /// The value when independent of ν.
    pub fn as_rat(&self) -> Option<Rat> {
        if self.den.is_one() {
            self.num.as_constant()
        } else {
            None
        }
    }

    pub fn is_constant(&self) -> bool {
        self.as_rat().is_some()
    }

    pub fn evaluate(&self, nu: &Rat) -> Result<Rat, ScalarError> {
        let den = self.den.eval(nu);
        if den.is_zero() {
            return Err(ScalarError::Pole {
                denominator: self.den.clone(),
                at: nu.clone(),
            });
        }
        Ok(self.num.eval(nu) / den)
    }

    pub fn checked_div(&self, rhs: &NuScalar) -> Result<NuScalar, ScalarError> {
        if rhs.is_zero() {
            return Err(ScalarError::DivideByZero);
        }
        Ok(Self::canonical(&self.num * &rhs.den, &self.den * &rhs.num))
    }

    pub fn recip(&self) -> Result<NuScalar, ScalarError> {
        NuScalar::one().checked_div(self)
    }

    pub fn scale(&self, factor: &Rat) -> NuScalar {
        if factor.is_zero() {
            return NuScalar::zero();
        }
        NuScalar {
            num: self.num.scale(factor),
            den: self.den.clone(),
        }
    }

    pub fn pow(&self, exp: u32) -> NuScalar {
        NuScalar {
            num: self.num.pow(exp),
            den: self.den.pow(exp),
        }
    }

    /// Rational values of ν where the denominator vanishes.
    pub fn poles(&self) -> Vec<Rat> {
        self.den.rational_roots()
    }
}

impl Default for NuScalar {
    fn default() -> Self {
        Self::zero()
    }
}

impl From<Rat> for NuScalar {
    fn from(value: Rat) -> Self {
        NuScalar::from_rat(value)
    }
}

impl From<NuPoly> for NuScalar {
    fn from(value: NuPoly) -> Self {
        NuScalar::from_poly(value)
    }
}

impl Add for &NuScalar {
    type Output = NuScalar;
    fn add(self, rhs: &NuScalar) -> NuScalar {
        if self.is_zero() {
            return rhs.clone();
        }
        if rhs.is_zero() {
            return self.clone();
        }
        if self.den == rhs.den {
            if self.den.is_one() {
                return NuScalar::from_poly(&self.num + &rhs.num);
            }
            return NuScalar::canonical(&self.num + &rhs.num, self.den.clone());
        }
        let num = &(&self.num * &rhs.den) + &(&rhs.num * &self.den);
        NuScalar::canonical(num, &self.den * &rhs.den)
    }
}

impl Neg for &NuScalar {
    type Output = NuScalar;
    fn neg(self) -> NuScalar {
        NuScalar {
            num: -&self.num,
            den: self.den.clone(),
        }
    }
}

impl Sub for &NuScalar {
    type Output = NuScalar;
    fn sub(self, rhs: &NuScalar) -> NuScalar {
        self + &(-rhs)
    }
}

impl Mul for &NuScalar {
    type Output = NuScalar;
    fn mul(self, rhs: &NuScalar) -> NuScalar {
        if self.is_zero() || rhs.is_zero() {
            return NuScalar::zero();
        }
        if self.den.is_one() && rhs.den.is_one() {
            return NuScalar::from_poly(&self.num * &rhs.num);
        }
        NuScalar::canonical(&self.num * &rhs.num, &self.den * &rhs.den)
    }
}

impl Div for &NuScalar {
    type Output = NuScalar;
    /// Panics on a zero divisor; see [`NuScalar::checked_div`].
    fn div(self, rhs: &NuScalar) -> NuScalar {
        self.checked_div(rhs).expect("division by the zero scalar")
    }
}

macro_rules! owned_binop {
    ($tr:ident, $method:ident) => {
        impl $tr<NuScalar> for NuScalar {
            type Output = NuScalar;
            fn $method(self, rhs: NuScalar) -> NuScalar {
                (&self).$method(&rhs)
            }
        }
        impl $tr<&NuScalar> for NuScalar {
            type Output = NuScalar;
            fn $method(self, rhs: &NuScalar) -> NuScalar {
                (&self).$method(rhs)
            }
        }
        impl $tr<NuScalar> for &NuScalar {
            type Output = NuScalar;
            fn $method(self, rhs: NuScalar) -> NuScalar {
                self.$method(&rhs)
            }
        }
    };
}

owned_binop!(Add, add);
owned_binop!(Sub, sub);
owned_binop!(Mul, mul);
owned_binop!(Div, div);

impl Neg for NuScalar {
    type Output = NuScalar;
    fn neg(self) -> NuScalar {
        -&self
    }
}

impl AddAssign<&NuScalar> for NuScalar {
    fn add_assign(&mut self, rhs: &NuScalar) {
        *self = &*self + rhs;
    }
}

impl std::iter::Sum for NuScalar {
    fn sum<I: Iterator<Item = NuScalar>>(iter: I) -> NuScalar {
        iter.fold(NuScalar::zero(), |acc, x| acc + x)
    }
}

impl fmt::Display for NuScalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.den.is_one() {
            return write!(f, "{}", self.num);
        }
        let wrap = |p: &NuPoly| {
            if p.coeffs().iter().filter(|c| !c.is_zero()).count() > 1 {
                format!("({p})")
            } else {
                p.to_string()
            }
        };
        write!(f, "{}/{}", wrap(&self.num), wrap(&self.den))
    }
}

impl fmt::Debug for NuScalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "NuScalar({self})")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn poly(cs: &[i64]) -> NuPoly {
        NuPoly::from_coeffs(cs.iter().map(|&c| Rat::from(c)).collect())
    }

    #[test]
    fn product_of_linear_terms() {
        let a = NuScalar::linear(1, 2);
        assert_eq!(&a * &a, NuScalar::from_poly(poly(&[1, 4, 4])));
    }

    #[test]
    fn additive_identity_keeps_form() {
        let x = NuScalar::new(NuPoly::one(), poly(&[1, 3])).unwrap();
        let y = &x + &NuScalar::zero();
        assert_eq!(y, x);
        assert_eq!(y.numer(), &NuPoly::one());
        assert_eq!(y.denom(), &poly(&[1, 3]));
    }

    #[test]
    fn gcd_reduction_to_canonical_form() {
        // (6ν+4ν²) / (2(1+2ν)²) -> ν(3+2ν)/(1+2ν)²
        let x = NuScalar::new(poly(&[0, 6, 4]), poly(&[2, 8, 8])).unwrap();
        assert_eq!(x.numer(), &poly(&[0, 3, 2]));
        assert_eq!(x.denom(), &poly(&[1, 4, 4]));
        // Independent check by evaluation at ν = 1: 10/18 on the raw form.
        assert_eq!(x.evaluate(&Rat::one()).unwrap(), Rat::new(5, 9));
    }

    #[test]
    fn shared_factor_and_negative_leading_denominator() {
        // (1+2ν)(1-ν) / (-(1+2ν)) = ν - 1
        let num = &poly(&[1, 2]) * &poly(&[1, -1]);
        let den = -&poly(&[1, 2]);
        let x = NuScalar::new(num, den).unwrap();
        assert_eq!(x, NuScalar::linear(-1, 1));
        assert!(x.is_polynomial());
    }

    #[test]
    fn evaluation_and_poles() {
        assert_eq!(
            NuScalar::linear(2, 3).evaluate(&Rat::new(-1, 2)).unwrap(),
            Rat::new(1, 2)
        );
        assert_eq!(NuScalar::linear(0, -1).evaluate(&Rat::zero()).unwrap(), Rat::zero());
        let x = NuScalar::one().checked_div(&NuScalar::linear(1, 3)).unwrap();
        match x.evaluate(&Rat::new(-1, 3)) {
            Err(ScalarError::Pole { denominator, .. }) => assert_eq!(denominator, poly(&[1, 3])),
            other => panic!("expected pole, got {other:?}"),
        }
        assert_eq!(x.poles(), vec![Rat::new(-1, 3)]);
    }

    #[test]
    fn division_by_zero() {
        assert!(matches!(
            NuScalar::one().checked_div(&NuScalar::zero()),
            Err(ScalarError::DivideByZero)
        ));
        assert!(NuScalar::new(NuPoly::one(), NuPoly::zero()).is_err());
    }

    #[test]
    fn json_shape() {
        let x = NuScalar::new(poly(&[0, 3, 2]), poly(&[1, 4, 4])).unwrap();
        let text = serde_json::to_string(&x).unwrap();
        assert_eq!(text, r#"{"num":["0","3","2"],"den":["1","4","4"]}"#);
        let half = NuScalar::from_rat(Rat::new(-1, 2));
        assert_eq!(serde_json::to_string(&half).unwrap(), r#"{"num":["-1/2"],"den":["1"]}"#);
        assert_eq!(serde_json::to_string(&NuScalar::zero()).unwrap(), r#"{"num":[],"den":["1"]}"#);
    }
}
