//! Supersingular j-invariants by point counting over `F_{p^2}`, and the
//! comparison with Atkin polynomials reduced mod `p`.

use std::collections::BTreeSet;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::atkin::{atkin, J_MAX};
use crate::error::{Error, Result};
use crate::Execution;

/// Largest prime accepted by [`match_report`]; point counting is `O(p^4)`.
pub const MAX_PRIME: u64 = 200;

fn mul_mod(a: u64, b: u64, p: u64) -> u64 {
    a * b % p
}

fn pow_mod(mut base: u64, mut exp: u64, p: u64) -> u64 {
    let mut acc = 1 % p;
    base %= p;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = mul_mod(acc, base, p);
        }
        base = mul_mod(base, base, p);
        exp >>= 1;
    }
    acc
}

fn inv_mod(a: u64, p: u64) -> u64 {
    pow_mod(a, p - 2, p)
}

pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    (2..).take_while(|d| d * d <= n).all(|d| !n.is_multiple_of(d))
}

fn check_prime(p: u64) -> Result<()> {
    if p < 5 || !is_prime(p) {
        Err(Error::InvalidPrime(p))
    } else {
        Ok(())
    }
}

/// Polynomial over `F_p`, coefficients ascending in `[0, p)`, trailing zeros trimmed.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct FpPoly {
    prime: u64,
    coefficients: Vec<u64>,
}

impl FpPoly {
    pub fn new(prime: u64, mut coefficients: Vec<u64>) -> Self {
        for c in coefficients.iter_mut() {
            *c %= prime;
        }
        while coefficients.last() == Some(&0) {
            coefficients.pop();
        }
        FpPoly { prime, coefficients }
    }

    pub fn one(prime: u64) -> Self {
        FpPoly::new(prime, vec![1])
    }

    pub fn prime(&self) -> u64 {
        self.prime
    }

    pub fn coeffs(&self) -> &[u64] {
        &self.coefficients
    }

    pub fn is_zero(&self) -> bool {
        self.coefficients.is_empty()
    }

    pub fn degree(&self) -> Option<usize> {
        self.coefficients.len().checked_sub(1)
    }

    pub fn is_monic(&self) -> bool {
        self.coefficients.last() == Some(&1)
    }

    pub fn eval(&self, x: u64) -> u64 {
        let p = self.prime;
        self.coefficients.iter().rev().fold(0, |acc, &c| (mul_mod(acc, x % p, p) + c) % p)
    }

    pub fn derivative(&self) -> FpPoly {
        let p = self.prime;
        FpPoly::new(
            p,
            self.coefficients
                .iter()
                .enumerate()
                .skip(1)
                .map(|(k, &c)| mul_mod(c, k as u64 % p, p))
                .collect(),
        )
    }

    /// Scaled to leading coefficient 1; the zero polynomial stays zero.
    pub fn monic(&self) -> FpPoly {
        match self.coefficients.last() {
            None => self.clone(),
            Some(&lead) => {
                let inv = inv_mod(lead, self.prime);
                FpPoly::new(
                    self.prime,
                    self.coefficients.iter().map(|&c| mul_mod(c, inv, self.prime)).collect(),
                )
            }
        }
    }

    /// Remainder of division by a nonzero `divisor`.
    pub fn rem(&self, divisor: &FpPoly) -> FpPoly {
        let p = self.prime;
        let dd = divisor.degree().expect("division by the zero polynomial");
        let inv = inv_mod(divisor.coefficients[dd], p);
        let mut r = self.coefficients.clone();
        while r.len() > dd && !r.is_empty() {
            let top = r.len() - 1;
            let factor = mul_mod(r[top], inv, p);
            if factor != 0 {
                for (i, &d) in divisor.coefficients.iter().enumerate() {
                    let k = top - dd + i;
                    r[k] = (r[k] + p - mul_mod(factor, d, p)) % p;
                }
            }
            r.pop();
        }
        FpPoly::new(p, r)
    }

    /// Monic greatest common divisor.
    pub fn gcd(&self, other: &FpPoly) -> FpPoly {
        let (mut a, mut b) = (self.clone(), other.clone());
        while !b.is_zero() {
            let r = a.rem(&b);
            a = b;
            b = r;
        }
        a.monic()
    }

    pub fn is_squarefree(&self) -> bool {
        self.gcd(&self.derivative()).degree() == Some(0)
    }
}

impl fmt::Display for FpPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (k, &c) in self.coefficients.iter().enumerate().rev() {
            if c == 0 {
                continue;
            }
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            let coeff = if c == 1 && k > 0 { String::new() } else { c.to_string() };
            match k {
                0 => write!(f, "{c}")?,
                1 => write!(f, "{coeff}j")?,
                _ => write!(f, "{coeff}j^{k}")?,
            }
        }
        Ok(())
    }
}

/// `a + b u` in `F_p[u] / (u^2 - d)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Fp2Element {
    pub a: u64,
    pub b: u64,
}

impl Fp2Element {
    pub const ZERO: Fp2Element = Fp2Element { a: 0, b: 0 };
    pub const ONE: Fp2Element = Fp2Element { a: 1, b: 0 };

    pub fn from_fp(a: u64) -> Self {
        Fp2Element { a, b: 0 }
    }

    pub fn is_zero(self) -> bool {
        self.a == 0 && self.b == 0
    }

    pub fn in_base_field(self) -> bool {
        self.b == 0
    }
}

/// `F_{p^2}` with `u^2 = d`, `d` the smallest quadratic non-residue mod `p`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Fp2Field {
    pub p: u64,
    pub d: u64,
}

impl Fp2Field {
    pub fn new(p: u64) -> Result<Self> {
        check_prime(p)?;
        let d = (2..p)
            .find(|&d| pow_mod(d, (p - 1) / 2, p) == p - 1)
            .expect("an odd prime has a non-residue");
        Ok(Fp2Field { p, d })
    }

    pub fn size(&self) -> usize {
        (self.p * self.p) as usize
    }

    /// Dense index `a + b p`.
    pub fn index(&self, x: Fp2Element) -> usize {
        (x.a + x.b * self.p) as usize
    }

    pub fn element(&self, index: usize) -> Fp2Element {
        let i = index as u64;
        Fp2Element { a: i % self.p, b: i / self.p }
    }

    pub fn add(&self, x: Fp2Element, y: Fp2Element) -> Fp2Element {
        Fp2Element { a: (x.a + y.a) % self.p, b: (x.b + y.b) % self.p }
    }

    pub fn sub(&self, x: Fp2Element, y: Fp2Element) -> Fp2Element {
        Fp2Element { a: (x.a + self.p - y.a) % self.p, b: (x.b + self.p - y.b) % self.p }
    }

    pub fn neg(&self, x: Fp2Element) -> Fp2Element {
        self.sub(Fp2Element::ZERO, x)
    }

    pub fn mul(&self, x: Fp2Element, y: Fp2Element) -> Fp2Element {
        let p = self.p;
        let bd = mul_mod(x.b, y.b, p);
        Fp2Element {
            a: (mul_mod(x.a, y.a, p) + mul_mod(bd, self.d, p)) % p,
            b: (mul_mod(x.a, y.b, p) + mul_mod(x.b, y.a, p)) % p,
        }
    }

    pub fn pow(&self, mut base: Fp2Element, mut exp: u64) -> Fp2Element {
        let mut acc = Fp2Element::ONE;
        while exp > 0 {
            if exp & 1 == 1 {
                acc = self.mul(acc, base);
            }
            base = self.mul(base, base);
            exp >>= 1;
        }
        acc
    }

    /// Inverse of a nonzero element via the norm `a^2 - d b^2`.
    pub fn inv(&self, x: Fp2Element) -> Result<Fp2Element> {
        if x.is_zero() {
            return Err(Error::DivisionByZero);
        }
        let p = self.p;
        let norm = (mul_mod(x.a, x.a, p) + p - mul_mod(self.d, mul_mod(x.b, x.b, p), p)) % p;
        let ni = inv_mod(norm, p);
        Ok(Fp2Element { a: mul_mod(x.a, ni, p), b: mul_mod((p - x.b) % p, ni, p) })
    }

    /// Membership table of the nonzero squares, indexed by [`Fp2Field::index`].
    pub fn squares_table(&self) -> Vec<bool> {
        let mut table = vec![false; self.size()];
        for i in 1..self.size() {
            let x = self.element(i);
            table[self.index(self.mul(x, x))] = true;
        }
        table
    }
}

/// Short Weierstrass coefficients `(A, B)` of a curve with invariant `j`.
fn curve_for_j(field: &Fp2Field, j: Fp2Element) -> Result<(Fp2Element, Fp2Element)> {
    let j1728 = Fp2Element::from_fp(J_MAX as u64 % field.p);
    if j.is_zero() {
        return Ok((Fp2Element::ZERO, Fp2Element::ONE));
    }
    if j == j1728 {
        return Ok((Fp2Element::ONE, Fp2Element::ZERO));
    }
    let k = field.mul(j, field.inv(field.sub(j1728, j))?);
    let three = Fp2Element::from_fp(3);
    let two = Fp2Element::from_fp(2);
    Ok((field.mul(three, k), field.mul(two, k)))
}

/// Supersingular j-invariants in `F_{p^2}`, ascending by dense index.
///
/// A curve is supersingular iff its trace `p^2 + 1 - #E(F_{p^2})` is divisible by `p`.
pub fn supersingular_j_invariants(p: u64) -> Result<Vec<Fp2Element>> {
    let field = Fp2Field::new(p)?;
    let squares = field.squares_table();
    let size = field.size();
    let xs: Vec<Fp2Element> = (0..size).map(|i| field.element(i)).collect();
    let cubes: Vec<Fp2Element> = xs.iter().map(|&x| field.mul(field.mul(x, x), x)).collect();
    let mut out = Vec::new();
    for ji in 0..size {
        let j = field.element(ji);
        let (a, b) = curve_for_j(&field, j)?;
        let mut chi_sum: i64 = 0;
        for (x, x3) in xs.iter().zip(&cubes) {
            let f = field.add(field.add(*x3, field.mul(a, *x)), b);
            if !f.is_zero() {
                chi_sum += if squares[field.index(f)] { 1 } else { -1 };
            }
        }
        // #E = p^2 + 1 + chi_sum, so the trace is -chi_sum
        if chi_sum.rem_euclid(p as i64) == 0 {
            out.push(j);
        }
    }
    Ok(out)
}

/// The supersingular polynomial: product of `(j - j_i)` over all supersingular
/// invariants, which must have coefficients in `F_p`.
pub fn ss_poly(p: u64) -> Result<FpPoly> {
    let field = Fp2Field::new(p)?;
    let roots = supersingular_j_invariants(p)?;
    let mut coeffs = vec![Fp2Element::ONE];
    for &r in &roots {
        let mut next = vec![Fp2Element::ZERO; coeffs.len() + 1];
        for (k, &c) in coeffs.iter().enumerate() {
            next[k + 1] = field.add(next[k + 1], c);
            next[k] = field.sub(next[k], field.mul(c, r));
        }
        coeffs = next;
    }
    if let Some(k) = coeffs.iter().position(|c| !c.in_base_field()) {
        return Err(Error::InternalInconsistency(format!(
            "supersingular polynomial mod {p} has coefficient of degree {k} outside F_p"
        )));
    }
    Ok(FpPoly::new(p, coeffs.iter().map(|c| c.a).collect()))
}

/// The supersingular invariants are permuted by `j -> j^p`.
pub fn frobenius_closed(p: u64) -> Result<bool> {
    let field = Fp2Field::new(p)?;
    let roots: BTreeSet<Fp2Element> = supersingular_j_invariants(p)?.into_iter().collect();
    Ok(roots.iter().all(|&r| roots.contains(&field.pow(r, p))))
}

/// `A_n` (original scaling) reduced mod `p`.
pub fn atkin_mod_p(n: usize, p: u64) -> Result<FpPoly> {
    check_prime(p)?;
    Ok(atkin(n).reduce_mod_p(p)?.monic())
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "status", rename_all = "snake_case")]
pub enum MatchStatus {
    Matched,
    Mismatched,
    /// `A_n` has a coefficient denominator divisible by `p`.
    NotApplicable { reason: String },
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct MatchRecord {
    pub p: u64,
    pub deg_ss: usize,
    pub ss: FpPoly,
    pub atkin: Option<FpPoly>,
    #[serde(flatten)]
    pub status: MatchStatus,
}

impl MatchRecord {
    pub fn matched(&self) -> Option<bool> {
        match self.status {
            MatchStatus::Matched => Some(true),
            MatchStatus::Mismatched => Some(false),
            MatchStatus::NotApplicable { .. } => None,
        }
    }
}

/// Compare `ss_p` with `A_{deg ss_p} mod p` for every prime `5 <= p <= p_max`.
pub fn match_report(p_max: u64, exec: Execution) -> Result<Vec<MatchRecord>> {
    if p_max > MAX_PRIME {
        return Err(Error::DomainError(format!("p_max = {p_max} exceeds the limit {MAX_PRIME}")));
    }
    let primes: Vec<u64> = (5..=p_max).filter(|&p| is_prime(p)).collect();
    exec.map(&primes, |&p| match_one(p)).into_iter().collect()
}

fn match_one(p: u64) -> Result<MatchRecord> {
    let ss = ss_poly(p)?;
    let deg_ss = ss.degree().expect("ss_p is nonzero");
    let (atkin, status) = match atkin_mod_p(deg_ss, p) {
        Ok(a) => {
            let status = if a == ss { MatchStatus::Matched } else { MatchStatus::Mismatched };
            (Some(a), status)
        }
        Err(e @ Error::DenominatorNotInvertible { .. }) => {
            (None, MatchStatus::NotApplicable { reason: e.to_string() })
        }
        Err(e) => return Err(e),
    };
    Ok(MatchRecord { p, deg_ss, ss, atkin, status })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn field_arithmetic() {
        let f = Fp2Field::new(7).unwrap();
        assert_eq!(f.d, 3);
        for i in 1..f.size() {
            let x = f.element(i);
            assert_eq!(f.mul(x, f.inv(x).unwrap()), Fp2Element::ONE);
            // x^(p^2 - 1) = 1
            assert_eq!(f.pow(x, 48), Fp2Element::ONE);
        }
        assert_eq!(f.squares_table().iter().filter(|&&s| s).count(), 24);
    }

    #[test]
    fn invalid_primes() {
        for p in [0, 1, 2, 3, 4, 9, 25, 91] {
            assert_eq!(ss_poly(p), Err(Error::InvalidPrime(p)));
        }
    }

    #[test]
    fn small_primes() {
        assert_eq!(ss_poly(5).unwrap(), FpPoly::new(5, vec![0, 1]));
        assert_eq!(ss_poly(7).unwrap(), FpPoly::new(7, vec![1, 1]));
        assert_eq!(ss_poly(11).unwrap(), FpPoly::new(11, vec![0, 10, 1]));
        assert_eq!(ss_poly(13).unwrap(), FpPoly::new(13, vec![8, 1]));
        assert_eq!(ss_poly(11).unwrap().to_string(), "j^2 + 10j");
    }

    #[test]
    fn atkin_reductions() {
        assert_eq!(atkin_mod_p(1, 5).unwrap(), FpPoly::new(5, vec![0, 1]));
        assert_eq!(atkin_mod_p(1, 13).unwrap(), FpPoly::new(13, vec![8, 1]));
        assert_eq!(atkin_mod_p(2, 11).unwrap(), FpPoly::new(11, vec![0, 10, 1]));
    }

    #[test]
    fn gcd_and_squarefree() {
        // (j - 1)^2 (j - 2) over F_7
        let sq = FpPoly::new(7, vec![5, 5, 3, 1]);
        assert!(!sq.is_squarefree());
        assert_eq!(sq.gcd(&sq.derivative()), FpPoly::new(7, vec![6, 1]));
        assert!(FpPoly::new(7, vec![1, 0, 1]).is_squarefree());
    }

    #[test]
    fn report_up_to_13() {
        let report = match_report(13, Execution::Sequential).unwrap();
        assert_eq!(report.iter().map(|r| r.p).collect::<Vec<_>>(), vec![5, 7, 11, 13]);
        assert!(report.iter().all(|r| r.matched() == Some(true)));
        assert!(match_report(201, Execution::Sequential).is_err());
    }
}
