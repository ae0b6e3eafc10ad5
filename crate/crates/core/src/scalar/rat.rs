use std::fmt;
use std::iter::{Product, Sum};
use std::ops::{Add, AddAssign, Div, Mul, MulAssign, Neg, Sub, SubAssign};
use std::str::FromStr;

use dashu_float::round::mode::HalfEven;
use dashu_float::FBig;
use dashu_int::IBig;
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use super::ScalarError;

/// Binary floating point value with a caller-chosen precision.
pub type Float = FBig<HalfEven>;

/// Exact rational number over arbitrary-precision integers.
///
/// Always stored in lowest terms with a positive denominator.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct Rat(BigRational);

impl Rat {
    /// Panics if `den` is zero.
    pub fn new(num: impl Into<BigInt>, den: impl Into<BigInt>) -> Self {
        let den = den.into();
        assert!(!den.is_zero(), "rational with zero denominator");
        Rat(BigRational::new(num.into(), den))
    }

    pub fn from_integer(value: impl Into<BigInt>) -> Self {
        Rat(BigRational::from_integer(value.into()))
    }

    pub fn zero() -> Self {
        Rat(BigRational::zero())
    }

    pub fn one() -> Self {
        Rat(BigRational::one())
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_zero()
    }

    pub fn is_one(&self) -> bool {
        self.0.is_one()
    }

    pub fn is_negative(&self) -> bool {
        self.0.is_negative()
    }

    pub fn is_positive(&self) -> bool {
        self.0.is_positive()
    }

    pub fn is_integer(&self) -> bool {
        self.0.is_integer()
    }

    pub fn numer(&self) -> &BigInt {
        self.0.numer()
    }

    pub fn denom(&self) -> &BigInt {
        self.0.denom()
    }

    pub fn abs(&self) -> Rat {
        Rat(self.0.abs())
    }

    pub fn pow(&self, exp: i32) -> Rat {
        Rat(num_traits::Pow::pow(&self.0, exp))
    }

    pub fn checked_div(&self, rhs: &Rat) -> Result<Rat, ScalarError> {
        if rhs.is_zero() {
            return Err(ScalarError::DivideByZero);
        }
        Ok(Rat(&self.0 / &rhs.0))
    }

    pub fn recip(&self) -> Result<Rat, ScalarError> {
        Rat::one().checked_div(self)
    }

    /// Correctly rounded (half-to-even) binary float with `precision` bits.
    pub fn to_float(&self, precision: usize) -> Float {
        let num = Float::from_parts(to_ibig(self.numer()), 0)
            .with_precision(precision)
            .value();
        let den = Float::from_parts(to_ibig(self.denom()), 0)
            .with_precision(precision)
            .value();
        num / den
    }

    /// Nearest `f64`.
    pub fn to_f64(&self) -> f64 {
        if self.is_zero() {
            return 0.0;
        }
        self.to_float(53).to_f64().value()
    }
}

fn to_ibig(value: &BigInt) -> IBig {
    // Hex keeps the conversion linear and independent of limb layout.
    IBig::from_str_radix(&value.to_str_radix(16), 16).expect("hex digits from num-bigint")
}

impl From<i64> for Rat {
    fn from(value: i64) -> Self {
        Rat::from_integer(value)
    }
}

impl From<BigRational> for Rat {
    fn from(value: BigRational) -> Self {
        Rat(value)
    }
}

impl FromStr for Rat {
    type Err = ScalarError;

    /// Accepts `"p"` or `"p/q"` with optional sign on `p`.
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let bad = || ScalarError::Parse(s.to_string());
        let text = s.trim();
        let (num, den) = match text.split_once('/') {
            Some((n, d)) => (n.trim(), d.trim()),
            None => (text, "1"),
        };
        let num: BigInt = num.parse().map_err(|_| bad())?;
        let den: BigInt = den.parse().map_err(|_| bad())?;
        if den.is_zero() {
            return Err(ScalarError::DivideByZero);
        }
        Ok(Rat::new(num, den))
    }
}

impl fmt::Display for Rat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_integer() {
            write!(f, "{}", self.0.numer())
        } else {
            write!(f, "{}/{}", self.0.numer(), self.0.denom())
        }
    }
}

impl fmt::Debug for Rat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl Serialize for Rat {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for Rat {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let text = String::deserialize(deserializer)?;
        text.parse().map_err(serde::de::Error::custom)
    }
}

macro_rules! forward_binop {
    ($tr:ident, $method:ident) => {
        impl $tr<&Rat> for &Rat {
            type Output = Rat;
            fn $method(self, rhs: &Rat) -> Rat {
                Rat((&self.0).$method(&rhs.0))
            }
        }
        impl $tr<Rat> for Rat {
            type Output = Rat;
            fn $method(self, rhs: Rat) -> Rat {
                Rat(self.0.$method(rhs.0))
            }
        }
        impl $tr<&Rat> for Rat {
            type Output = Rat;
            fn $method(self, rhs: &Rat) -> Rat {
                Rat(self.0.$method(&rhs.0))
            }
        }
        impl $tr<Rat> for &Rat {
            type Output = Rat;
            fn $method(self, rhs: Rat) -> Rat {
                Rat((&self.0).$method(rhs.0))
            }
        }
    };
}

forward_binop!(Add, add);
forward_binop!(Sub, sub);
forward_binop!(Mul, mul);
// Panics on a zero divisor, like the integer types; use `checked_div` otherwise.
forward_binop!(Div, div);

impl Neg for Rat {
    type Output = Rat;
    fn neg(self) -> Rat {
        Rat(-self.0)
    }
}

impl Neg for &Rat {
    type Output = Rat;
    fn neg(self) -> Rat {
        Rat(-&self.0)
    }
}

impl AddAssign<&Rat> for Rat {
    fn add_assign(&mut self, rhs: &Rat) {
        self.0 += &rhs.0;
    }
}

impl SubAssign<&Rat> for Rat {
    fn sub_assign(&mut self, rhs: &Rat) {
        self.0 -= &rhs.0;
    }
}

impl MulAssign<&Rat> for Rat {
    fn mul_assign(&mut self, rhs: &Rat) {
        self.0 *= &rhs.0;
    }
}

impl Sum for Rat {
    fn sum<I: Iterator<Item = Rat>>(iter: I) -> Rat {
        iter.fold(Rat::zero(), |acc, x| acc + x)
    }
}

impl Product for Rat {
    fn product<I: Iterator<Item = Rat>>(iter: I) -> Rat {
        iter.fold(Rat::one(), |acc, x| acc * x)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parse_and_display() {
        let r: Rat = "-2/6".parse().unwrap();
        assert_eq!(r, Rat::new(-1, 3));
        assert_eq!(r.to_string(), "-1/3");
        assert_eq!("4/2".parse::<Rat>().unwrap().to_string(), "2");
        assert!(matches!("1/0".parse::<Rat>(), Err(ScalarError::DivideByZero)));
        assert!("x".parse::<Rat>().is_err());
    }

    #[test]
    fn float_conversion_rounds_to_nearest() {
        assert_eq!(Rat::new(1, 3).to_f64(), 0.3333333333333333);
        assert_eq!(Rat::zero().to_f64(), 0.0);
        assert_eq!(Rat::new(14, 3).to_f64(), 4.666666666666667);
        assert_eq!(Rat::new(-7, 2).to_f64(), -3.5);
        // 2^-1074 is the smallest subnormal; make sure huge denominators survive.
        let tiny = Rat::new(1, BigInt::from(2).pow(60));
        assert_eq!(tiny.to_f64(), 2f64.powi(-60));
    }

    #[test]
    fn high_precision_third() {
        let x = Rat::new(1, 3).to_float(128);
        let err = (x * Float::from(3) - Float::from(1)).to_f64().value().abs();
        assert!(err < 1e-37);
    }

    #[test]
    fn checked_division() {
        assert!(matches!(Rat::one().checked_div(&Rat::zero()), Err(ScalarError::DivideByZero)));
        assert_eq!(Rat::new(3, 4).recip().unwrap(), Rat::new(4, 3));
    }
}
