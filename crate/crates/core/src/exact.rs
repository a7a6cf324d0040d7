//! Exact rational arithmetic and the combinatorial primitives built on it.
//!
//! [`Rational`] wraps a canonical big rational: the denominator is positive and
//! coprime to the numerator after every operation, so structural equality is
//! value equality.

use std::fmt;
use std::iter::{Product, Sum};
use std::ops::{Add, AddAssign, Div, Mul, MulAssign, Neg, Sub, SubAssign};
use std::str::FromStr;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};

#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct Rational(BigRational);

impl Rational {
    pub fn new(numerator: i64, denominator: i64) -> Self {
        assert!(denominator != 0, "Rational::new: zero denominator");
        Rational(BigRational::new(numerator.into(), denominator.into()))
    }

    pub fn from_bigints(numerator: BigInt, denominator: BigInt) -> Result<Self> {
        if denominator.is_zero() {
            return Err(Error::DivisionByZero);
        }
        Ok(Rational(BigRational::new(numerator, denominator)))
    }

    pub fn integer(n: i64) -> Self {
        Rational(BigRational::from_integer(n.into()))
    }

    pub fn zero() -> Self {
        Rational(BigRational::zero())
    }

    pub fn one() -> Self {
        Rational(BigRational::one())
    }

    /// Exact value of a finite double (every finite `f64` is a dyadic rational).
    pub fn from_f64(x: f64) -> Option<Self> {
        BigRational::from_float(x).map(Rational)
    }

    pub fn numer(&self) -> &BigInt {
        self.0.numer()
    }

    pub fn denom(&self) -> &BigInt {
        self.0.denom()
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_zero()
    }

    pub fn is_one(&self) -> bool {
        self.0.is_one()
    }

    pub fn is_integer(&self) -> bool {
        self.0.is_integer()
    }

    pub fn is_negative(&self) -> bool {
        self.0.is_negative()
    }

    /// `Some(k)` when the value is an integer `-k <= 0` that fits in `u64`.
    pub fn as_nonpositive_integer(&self) -> Option<u64> {
        if self.is_integer() && !self.0.is_positive() {
            (-self.0.numer()).to_u64()
        } else {
            None
        }
    }

    pub fn abs(&self) -> Self {
        Rational(self.0.abs())
    }

    pub fn to_f64(&self) -> f64 {
        self.0.to_f64().unwrap_or(f64::NAN)
    }

    pub fn checked_div(&self, rhs: &Rational) -> Result<Rational> {
        if rhs.is_zero() {
            return Err(Error::DivisionByZero);
        }
        Ok(Rational(&self.0 / &rhs.0))
    }

    pub fn recip(&self) -> Result<Rational> {
        Rational::one().checked_div(self)
    }

    pub fn pow(&self, exp: u32) -> Rational {
        let mut out = Rational::one();
        for _ in 0..exp {
            out *= self;
        }
        out
    }
}

impl From<i64> for Rational {
    fn from(n: i64) -> Self {
        Rational::integer(n)
    }
}

impl From<BigInt> for Rational {
    fn from(n: BigInt) -> Self {
        Rational(BigRational::from_integer(n))
    }
}

impl fmt::Display for Rational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.denom().is_one() {
            write!(f, "{}", self.0.numer())
        } else {
            write!(f, "{}/{}", self.0.numer(), self.0.denom())
        }
    }
}

impl fmt::Debug for Rational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl FromStr for Rational {
    type Err = Error;

    /// Accepts `"num"`, `"num/den"` and finite decimals such as `"-0.25"`.
    fn from_str(s: &str) -> Result<Self> {
        let bad = || Error::ParseRational(s.to_string());
        let t = s.trim();
        if let Some((n, d)) = t.split_once('/') {
            let n: BigInt = n.trim().parse().map_err(|_| bad())?;
            let d: BigInt = d.trim().parse().map_err(|_| bad())?;
            return Rational::from_bigints(n, d).map_err(|_| bad());
        }
        if let Some((int_part, frac_part)) = t.split_once('.') {
            if frac_part.is_empty() || !frac_part.chars().all(|c| c.is_ascii_digit()) {
                return Err(bad());
            }
            let negative = int_part.starts_with('-');
            let int_digits = int_part.trim_start_matches(['-', '+']);
            let int_val: BigInt = if int_digits.is_empty() {
                BigInt::zero()
            } else {
                int_digits.parse().map_err(|_| bad())?
            };
            let frac_val: BigInt = frac_part.parse().map_err(|_| bad())?;
            let scale = num_traits::pow(BigInt::from(10), frac_part.len());
            let magnitude = int_val * &scale + frac_val;
            let numer = if negative { -magnitude } else { magnitude };
            return Rational::from_bigints(numer, scale);
        }
        let n: BigInt = t.parse().map_err(|_| bad())?;
        Ok(Rational::from(n))
    }
}

impl Serialize for Rational {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        serializer.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for Rational {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(deserializer)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

macro_rules! forward_binop {
    ($trait:ident, $method:ident, $op:tt) => {
        impl $trait<&Rational> for &Rational {
            type Output = Rational;
            fn $method(self, rhs: &Rational) -> Rational {
                Rational(&self.0 $op &rhs.0)
            }
        }
        impl $trait<Rational> for Rational {
            type Output = Rational;
            fn $method(self, rhs: Rational) -> Rational {
                Rational(self.0 $op rhs.0)
            }
        }
        impl $trait<&Rational> for Rational {
            type Output = Rational;
            fn $method(self, rhs: &Rational) -> Rational {
                Rational(self.0 $op &rhs.0)
            }
        }
        impl $trait<Rational> for &Rational {
            type Output = Rational;
            fn $method(self, rhs: Rational) -> Rational {
                Rational(&self.0 $op rhs.0)
            }
        }
        impl $trait<i64> for Rational {
            type Output = Rational;
            fn $method(self, rhs: i64) -> Rational {
                Rational(self.0 $op BigRational::from_integer(rhs.into()))
            }
        }
        impl $trait<i64> for &Rational {
            type Output = Rational;
            fn $method(self, rhs: i64) -> Rational {
                Rational(&self.0 $op BigRational::from_integer(rhs.into()))
            }
        }
    };
}

forward_binop!(Add, add, +);
forward_binop!(Sub, sub, -);
forward_binop!(Mul, mul, *);

// Division panics on a zero divisor; fallible call sites use `checked_div`.
impl Div<&Rational> for &Rational {
    type Output = Rational;
    fn div(self, rhs: &Rational) -> Rational {
        self.checked_div(rhs).expect("Rational division by zero")
    }
}

impl Div<Rational> for Rational {
    type Output = Rational;
    fn div(self, rhs: Rational) -> Rational {
        &self / &rhs
    }
}

impl Div<&Rational> for Rational {
    type Output = Rational;
    fn div(self, rhs: &Rational) -> Rational {
        &self / rhs
    }
}

impl Div<i64> for Rational {
    type Output = Rational;
    fn div(self, rhs: i64) -> Rational {
        &self / &Rational::integer(rhs)
    }
}

impl Div<i64> for &Rational {
    type Output = Rational;
    fn div(self, rhs: i64) -> Rational {
        self / &Rational::integer(rhs)
    }
}

impl Neg for Rational {
    type Output = Rational;
    fn neg(self) -> Rational {
        Rational(-self.0)
    }
}

impl Neg for &Rational {
    type Output = Rational;
    fn neg(self) -> Rational {
        Rational(-&self.0)
    }
}

impl AddAssign<&Rational> for Rational {
    fn add_assign(&mut self, rhs: &Rational) {
        self.0 += &rhs.0;
    }
}

impl AddAssign<Rational> for Rational {
    fn add_assign(&mut self, rhs: Rational) {
        self.0 += rhs.0;
    }
}

impl SubAssign<&Rational> for Rational {
    fn sub_assign(&mut self, rhs: &Rational) {
        self.0 -= &rhs.0;
    }
}

impl SubAssign<Rational> for Rational {
    fn sub_assign(&mut self, rhs: Rational) {
        self.0 -= rhs.0;
    }
}

impl MulAssign<&Rational> for Rational {
    fn mul_assign(&mut self, rhs: &Rational) {
        self.0 *= &rhs.0;
    }
}

impl MulAssign<Rational> for Rational {
    fn mul_assign(&mut self, rhs: Rational) {
        self.0 *= rhs.0;
    }
}

impl Sum for Rational {
    fn sum<I: Iterator<Item = Rational>>(iter: I) -> Rational {
        iter.fold(Rational::zero(), |acc, x| acc + x)
    }
}

impl Product for Rational {
    fn product<I: Iterator<Item = Rational>>(iter: I) -> Rational {
        iter.fold(Rational::one(), |acc, x| acc * x)
    }
}

/// Shorthand for `Rational::new`.
pub fn q(numerator: i64, denominator: i64) -> Rational {
    Rational::new(numerator, denominator)
}

/// Rising factorial `(a)_n = a (a+1) ... (a+n-1)`, with `(a)_0 = 1`.
pub fn pochhammer(a: &Rational, n: u64) -> Rational {
    let mut out = Rational::one();
    let mut factor = a.clone();
    for _ in 0..n {
        out *= &factor;
        factor += Rational::one();
    }
    out
}

/// Generalized binomial `a (a-1) ... (a-k+1) / k!`.
pub fn gen_binom(a: &Rational, k: u64) -> Rational {
    let mut out = Rational::one();
    let mut factor = a.clone();
    for i in 1..=k {
        out *= &factor;
        out = out / i as i64;
        factor -= Rational::one();
    }
    out
}

pub fn factorial(n: u64) -> BigInt {
    (1..=n).fold(BigInt::one(), |acc, i| acc * BigInt::from(i))
}

pub fn binomial(n: u64, k: u64) -> BigInt {
    if k > n {
        return BigInt::zero();
    }
    let k = k.min(n - k);
    let mut out = BigInt::one();
    for i in 0..k {
        out = out * BigInt::from(n - i) / BigInt::from(i + 1);
    }
    out
}

/// Catalan number `C_n = binomial(2n, n) / (n + 1)`.
pub fn catalan(n: u64) -> BigInt {
    binomial(2 * n, n) / BigInt::from(n + 1)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn pochhammer_examples() {
        assert_eq!(pochhammer(&Rational::integer(5), 0), Rational::one());
        assert_eq!(pochhammer(&q(-5, 12), 1), q(-5, 12));
        // (11/12)(23/12)
        assert_eq!(pochhammer(&q(11, 12), 2), q(11, 12) * q(23, 12));
        assert_eq!(pochhammer(&q(11, 12), 2), q(253, 144));
    }

    #[test]
    fn gen_binom_examples() {
        assert_eq!(gen_binom(&q(-1, 12), 0), Rational::one());
        assert_eq!(gen_binom(&q(-1, 12), 1), q(-1, 12));
        assert_eq!(gen_binom(&q(-5, 12), 2), q(-5, 12) * q(-17, 12) / 2);
        assert_eq!(gen_binom(&q(-5, 12), 2), q(85, 288));
        // integer upper argument agrees with the ordinary binomial
        assert_eq!(gen_binom(&Rational::integer(7), 3), Rational::integer(35));
        assert_eq!(gen_binom(&Rational::integer(-1), 4), Rational::one());
    }

    #[test]
    fn catalan_examples() {
        assert_eq!(catalan(0), BigInt::from(1));
        assert_eq!(catalan(1), BigInt::from(1));
        assert_eq!(catalan(3), BigInt::from(5));
        assert_eq!(catalan(10), BigInt::from(16796));
    }

    #[test]
    fn catalan_convolution() {
        for n in 0..=15u64 {
            let conv: BigInt = (0..=n).map(|i| catalan(i) * catalan(n - i)).sum();
            assert_eq!(catalan(n + 1), conv, "n = {n}");
        }
    }

    #[test]
    fn canonical_serialization() {
        assert_eq!(q(6, -8).to_string(), "-3/4");
        assert_eq!(Rational::integer(-720).to_string(), "-720");
        assert_eq!("10/-4".parse::<Rational>().unwrap(), q(-5, 2));
        assert_eq!("-0.25".parse::<Rational>().unwrap(), q(-1, 4));
        assert_eq!(".5".parse::<Rational>().unwrap(), q(1, 2));
        assert!("1/0".parse::<Rational>().is_err());
        assert!("abc".parse::<Rational>().is_err());
        let json = serde_json::to_string(&q(935, 10368)).unwrap();
        assert_eq!(json, "\"935/10368\"");
        let back: Rational = serde_json::from_str(&json).unwrap();
        assert_eq!(back, q(935, 10368));
    }

    #[test]
    fn division_by_zero_is_an_error() {
        assert_eq!(Rational::one().checked_div(&Rational::zero()), Err(Error::DivisionByZero));
        assert!(Rational::zero().recip().is_err());
    }

    #[test]
    fn nonpositive_integer_detection() {
        assert_eq!(Rational::integer(-3).as_nonpositive_integer(), Some(3));
        assert_eq!(Rational::zero().as_nonpositive_integer(), Some(0));
        assert_eq!(Rational::integer(2).as_nonpositive_integer(), None);
        assert_eq!(q(-1, 2).as_nonpositive_integer(), None);
    }

    mod props {
        use super::*;
        use proptest::prelude::*;

        fn small_rational() -> impl Strategy<Value = Rational> {
            (-60i64..60, 1i64..25).prop_map(|(n, d)| q(n, d))
        }

        proptest! {
            #[test]
            fn pochhammer_splits(a in small_rational(), m in 0u64..=10, n in 0u64..=10) {
                let lhs = pochhammer(&a, m + n);
                let rhs = pochhammer(&a, m) * pochhammer(&(&a + m as i64), n);
                prop_assert_eq!(lhs, rhs);
            }

            #[test]
            fn gen_binom_vs_pochhammer(a in small_rational(), k in 0u64..=20) {
                let lhs = gen_binom(&a, k) * Rational::from(factorial(k));
                let sign = if k % 2 == 0 { 1 } else { -1 };
                let rhs = pochhammer(&(-&a), k) * sign;
                prop_assert_eq!(lhs, rhs);
            }

            #[test]
            fn canonical_form_roundtrip(a in small_rational()) {
                let s = a.to_string();
                prop_assert_eq!(s.parse::<Rational>().unwrap(), a);
            }
        }
    }
}
