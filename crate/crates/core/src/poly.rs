//! Dense univariate polynomials over [`Rational`].

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exact::Rational;
use crate::supersingular::FpPoly;

/// Coefficients ascending by degree, trailing zeros trimmed; the zero
/// polynomial is the empty vector.
#[derive(Clone, PartialEq, Eq, Hash, Default, Serialize, Deserialize)]
#[serde(transparent)]
pub struct RatPoly {
    coeffs: Vec<Rational>,
}

impl RatPoly {
    pub fn new(mut coeffs: Vec<Rational>) -> Self {
        while coeffs.last().is_some_and(Rational::is_zero) {
            coeffs.pop();
        }
        RatPoly { coeffs }
    }

    pub fn zero() -> Self {
        RatPoly { coeffs: Vec::new() }
    }

    pub fn constant(c: Rational) -> Self {
        RatPoly::new(vec![c])
    }

    pub fn one() -> Self {
        RatPoly::constant(Rational::one())
    }

    /// The monic linear polynomial `x - root`.
    pub fn x_minus(root: Rational) -> Self {
        RatPoly::new(vec![-root, Rational::one()])
    }

    pub fn monomial(coefficient: Rational, degree: usize) -> Self {
        let mut coeffs = vec![Rational::zero(); degree + 1];
        coeffs[degree] = coefficient;
        RatPoly::new(coeffs)
    }

    pub fn coeffs(&self) -> &[Rational] {
        &self.coeffs
    }

    pub fn into_coeffs(self) -> Vec<Rational> {
        self.coeffs
    }

    /// Coefficient of `x^k`, zero beyond the degree.
    pub fn coeff(&self, k: usize) -> Rational {
        self.coeffs.get(k).cloned().unwrap_or_else(Rational::zero)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn leading(&self) -> Option<&Rational> {
        self.coeffs.last()
    }

    pub fn is_monic(&self) -> bool {
        self.leading().is_some_and(Rational::is_one)
    }

    pub fn eval(&self, x: &Rational) -> Rational {
        self.coeffs
            .iter()
            .rev()
            .fold(Rational::zero(), |acc, c| acc * x + c)
    }

    /// Horner evaluation in double precision on rounded coefficients.
    pub fn eval_f64(&self, x: f64) -> f64 {
        self.coeffs
            .iter()
            .rev()
            .fold(0.0, |acc, c| acc * x + c.to_f64())
    }

    pub fn scale(&self, c: &Rational) -> RatPoly {
        RatPoly::new(self.coeffs.iter().map(|a| a * c).collect())
    }

    /// `(x - root) * self`.
    pub fn mul_x_minus(&self, root: &Rational) -> RatPoly {
        let mut out = vec![Rational::zero(); self.coeffs.len() + 1];
        for (k, c) in self.coeffs.iter().enumerate() {
            out[k + 1] += c;
            out[k] -= c * root;
        }
        RatPoly::new(out)
    }

    /// `q(x) = p(a x + b)`.
    pub fn affine_substitute(&self, a: &Rational, b: &Rational) -> Result<RatPoly> {
        if a.is_zero() {
            return Err(Error::DegenerateSubstitution);
        }
        // Horner in the polynomial ring: q = (...(c_n (a x + b) + c_{n-1})(a x + b) ...)
        let mut acc = RatPoly::zero();
        for c in self.coeffs.iter().rev() {
            let mut next = vec![Rational::zero(); acc.coeffs.len() + 1];
            for (k, ck) in acc.coeffs.iter().enumerate() {
                next[k + 1] += ck * a;
                next[k] += ck * b;
            }
            next[0] += c;
            acc = RatPoly::new(next);
        }
        Ok(acc)
    }

    pub fn derivative(&self) -> RatPoly {
        RatPoly::new(
            self.coeffs
                .iter()
                .enumerate()
                .skip(1)
                .map(|(k, c)| c * k as i64)
                .collect(),
        )
    }

    /// Coefficient-wise image in `F_p`.
    pub fn reduce_mod_p(&self, prime: u64) -> Result<FpPoly> {
        let p = BigInt::from(prime);
        let mut out = Vec::with_capacity(self.coeffs.len());
        for c in &self.coeffs {
            let den = c.denom().mod_floor(&p);
            if den.is_zero() {
                return Err(Error::DenominatorNotInvertible {
                    prime,
                    denominator: c.denom().to_string(),
                });
            }
            let num = c.numer().mod_floor(&p);
            let den_inv = den.modpow(&BigInt::from(prime - 2), &p);
            let v = (num * den_inv).mod_floor(&p);
            out.push(v.to_u64().expect("residue fits in u64"));
        }
        Ok(FpPoly::new(prime, out))
    }
}

impl fmt::Debug for RatPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl fmt::Display for RatPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (k, c) in self.coeffs.iter().enumerate().rev() {
            if c.is_zero() {
                continue;
            }
            let (sign, mag) = if c.is_negative() { ("-", c.abs()) } else { ("+", c.clone()) };
            if first {
                if sign == "-" {
                    write!(f, "-")?;
                }
            } else {
                write!(f, " {sign} ")?;
            }
            first = false;
            match (k, mag.is_one()) {
                (0, _) => write!(f, "{mag}")?,
                (1, true) => write!(f, "x")?,
                (1, false) => write!(f, "({mag})x")?,
                (_, true) => write!(f, "x^{k}")?,
                (_, false) => write!(f, "({mag})x^{k}")?,
            }
        }
        Ok(())
    }
}

impl Add<&RatPoly> for &RatPoly {
    type Output = RatPoly;
    fn add(self, rhs: &RatPoly) -> RatPoly {
        let n = self.coeffs.len().max(rhs.coeffs.len());
        RatPoly::new((0..n).map(|k| self.coeff(k) + rhs.coeff(k)).collect())
    }
}

impl Sub<&RatPoly> for &RatPoly {
    type Output = RatPoly;
    fn sub(self, rhs: &RatPoly) -> RatPoly {
        let n = self.coeffs.len().max(rhs.coeffs.len());
        RatPoly::new((0..n).map(|k| self.coeff(k) - rhs.coeff(k)).collect())
    }
}

impl Mul<&RatPoly> for &RatPoly {
    type Output = RatPoly;
    fn mul(self, rhs: &RatPoly) -> RatPoly {
        if self.is_zero() || rhs.is_zero() {
            return RatPoly::zero();
        }
        let mut out = vec![Rational::zero(); self.coeffs.len() + rhs.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in rhs.coeffs.iter().enumerate() {
                out[i + j] += a * b;
            }
        }
        RatPoly::new(out)
    }
}

impl Neg for &RatPoly {
    type Output = RatPoly;
    fn neg(self) -> RatPoly {
        RatPoly::new(self.coeffs.iter().map(|c| -c).collect())
    }
}

impl Add for RatPoly {
    type Output = RatPoly;
    fn add(self, rhs: RatPoly) -> RatPoly {
        &self + &rhs
    }
}

impl Sub for RatPoly {
    type Output = RatPoly;
    fn sub(self, rhs: RatPoly) -> RatPoly {
        &self - &rhs
    }
}

impl Mul for RatPoly {
    type Output = RatPoly;
    fn mul(self, rhs: RatPoly) -> RatPoly {
        &self * &rhs
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::q;

    fn poly(cs: &[(i64, i64)]) -> RatPoly {
        RatPoly::new(cs.iter().map(|&(n, d)| q(n, d)).collect())
    }

    #[test]
    fn eval_examples() {
        assert_eq!(RatPoly::zero().eval(&Rational::integer(7)), Rational::zero());
        let a1 = poly(&[(-720, 1), (1, 1)]);
        assert_eq!(a1.eval(&Rational::integer(720)), Rational::zero());
        let a2 = poly(&[(269280, 1), (-1640, 1), (1, 1)]);
        assert_eq!(a2.eval(&Rational::zero()), Rational::integer(269280));
    }

    #[test]
    fn trailing_zeros_trimmed() {
        let p = poly(&[(1, 1), (0, 1), (0, 1)]);
        assert_eq!(p.degree(), Some(0));
        assert_eq!(poly(&[(0, 1)]).degree(), None);
        assert!((&p - &p).is_zero());
    }

    #[test]
    fn affine_examples() {
        let x = poly(&[(0, 1), (1, 1)]);
        assert_eq!(
            x.affine_substitute(&Rational::integer(2), &Rational::integer(-1)).unwrap(),
            poly(&[(-1, 1), (2, 1)])
        );
        let a1 = poly(&[(-720, 1), (1, 1)]);
        let scaled = a1
            .affine_substitute(&Rational::integer(1728), &Rational::zero())
            .unwrap()
            .scale(&q(1, 1728));
        assert_eq!(scaled, poly(&[(-5, 12), (1, 1)]));
        let x2 = poly(&[(0, 1), (0, 1), (1, 1)]);
        assert_eq!(
            x2.affine_substitute(&Rational::one(), &Rational::integer(5)).unwrap(),
            poly(&[(25, 1), (10, 1), (1, 1)])
        );
        assert_eq!(
            x.affine_substitute(&Rational::zero(), &Rational::one()),
            Err(Error::DegenerateSubstitution)
        );
    }

    #[test]
    fn reduce_examples() {
        let a1 = poly(&[(-720, 1), (1, 1)]);
        assert_eq!(a1.reduce_mod_p(5).unwrap().coeffs(), &[0, 1]);
        let a2 = poly(&[(269280, 1), (-1640, 1), (1, 1)]);
        assert_eq!(a2.reduce_mod_p(11).unwrap().coeffs(), &[0, 10, 1]);
        let b1 = poly(&[(-5, 12), (1, 1)]);
        assert!(matches!(
            b1.reduce_mod_p(2),
            Err(Error::DenominatorNotInvertible { prime: 2, .. })
        ));
        // 5/12 mod 7: 12 = 5, so 5 * 5^{-1} = 1 -> coefficient -1 = 6
        assert_eq!(b1.reduce_mod_p(7).unwrap().coeffs(), &[6, 1]);
    }

    #[test]
    fn json_is_array_of_rational_strings() {
        let p = poly(&[(935, 10368), (-205, 216), (1, 1)]);
        assert_eq!(
            serde_json::to_string(&p).unwrap(),
            r#"["935/10368","-205/216","1"]"#
        );
    }

    #[test]
    fn display() {
        assert_eq!(poly(&[(-5, 12), (1, 1)]).to_string(), "x - 5/12");
        assert_eq!(poly(&[(0, 1), (-3, 2), (2, 1)]).to_string(), "(2)x^2 - (3/2)x");
    }

    mod props {
        use super::*;
        use proptest::prelude::*;

        fn rational() -> impl Strategy<Value = Rational> {
            (-50i64..50, 1i64..20).prop_map(|(n, d)| q(n, d))
        }

        fn rat_poly(max_degree: usize) -> impl Strategy<Value = RatPoly> {
            proptest::collection::vec(rational(), 0..=max_degree + 1).prop_map(RatPoly::new)
        }

        proptest! {
            #[test]
            fn affine_inverse_roundtrip(p in rat_poly(10), a in prop::sample::select(vec![2i64, 1728, -3]), b in rational()) {
                let a = Rational::integer(a);
                let there = p.affine_substitute(&a, &b).unwrap();
                let a_inv = a.recip().unwrap();
                let b_back = -(&b * &a_inv);
                let back = there.affine_substitute(&a_inv, &b_back).unwrap();
                prop_assert_eq!(back, p);
            }

            #[test]
            fn eval_is_a_ring_homomorphism(p in rat_poly(8), r in rat_poly(8), x in rational()) {
                prop_assert_eq!((&p + &r).eval(&x), p.eval(&x) + r.eval(&x));
                prop_assert_eq!((&p * &r).eval(&x), p.eval(&x) * r.eval(&x));
            }

            #[test]
            fn affine_matches_pointwise(p in rat_poly(6), a in rational(), b in rational(), x in rational()) {
                prop_assume!(!a.is_zero());
                let s = p.affine_substitute(&a, &b).unwrap();
                prop_assert_eq!(s.eval(&x), p.eval(&(&a * &x + &b)));
            }
        }
    }
}
