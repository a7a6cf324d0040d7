//! Atkin polynomials in the original (`[0, 1728]`) and normalized (`[0, 1]`)
//! scalings, their closed-form special values and the double binomial sum.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exact::{factorial, gen_binom, pochhammer, q, Rational};
use crate::poly::RatPoly;

/// Right end of the orthogonality interval in the original scaling.
pub const J_MAX: i64 = 1728;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Scale {
    /// `A_n(x)`, orthogonal on `[0, 1728]`.
    Original,
    /// `A_n(1728 y) / 1728^n`, orthogonal on `[0, 1]`.
    Normalized,
}

/// Monic three-term recurrence data: `P_{n+1} = (x - a_n) P_n - b_n P_{n-1}`.
///
/// The printed recurrence only covers `n >= 2`; `a_0`, `a_1`, `b_1` are read
/// off the seeded `P_1`, `P_2`. `b_0` is zero.
pub fn recurrence_coefficients(scale: Scale, n: u64) -> (Rational, Rational) {
    let n_i = n as i64;
    match scale {
        Scale::Original => match n {
            0 => (Rational::integer(720), Rational::zero()),
            1 => (Rational::integer(920), Rational::integer(393120)),
            _ => {
                let a = Rational::integer(24 * (144 * n_i * n_i - 29))
                    / ((2 * n_i + 1) * (2 * n_i - 1));
                let b = Rational::integer(
                    36 * (12 * n_i - 13) * (12 * n_i - 7) * (12 * n_i - 5) * (12 * n_i + 1),
                ) / (n_i * (n_i - 1) * (2 * n_i - 1) * (2 * n_i - 1));
                (a, b)
            }
        },
        Scale::Normalized => match n {
            0 => (q(5, 12), Rational::zero()),
            1 => (q(115, 216), q(455, 3456)),
            _ => {
                let nr = Rational::integer(n_i);
                let a = (&nr * &nr - q(29, 144)) * 2 / (4 * n_i * n_i - 1);
                let b = (&nr - q(13, 12)) * (&nr - q(7, 12)) * (&nr - q(5, 12)) * (&nr + q(1, 12))
                    / (2 * n_i * (2 * n_i - 1) * (2 * n_i - 1) * (2 * n_i - 2));
                (a, b)
            }
        },
    }
}

/// Append-only cache of one scaling of the family.
///
/// Filling needs `&mut self`; share a filled family by reference, or build one
/// per thread.
#[derive(Debug, Clone)]
pub struct AtkinFamily {
    scale: Scale,
    cache: Vec<RatPoly>,
}

impl AtkinFamily {
    pub fn new(scale: Scale) -> Self {
        let cache = match scale {
            Scale::Original => vec![
                RatPoly::one(),
                RatPoly::new(vec![Rational::integer(-720), Rational::one()]),
                RatPoly::new(vec![
                    Rational::integer(269280),
                    Rational::integer(-1640),
                    Rational::one(),
                ]),
            ],
            Scale::Normalized => vec![
                RatPoly::one(),
                RatPoly::new(vec![q(-5, 12), Rational::one()]),
                RatPoly::new(vec![q(935, 10368), q(-205, 216), Rational::one()]),
            ],
        };
        AtkinFamily { scale, cache }
    }

    pub fn scale(&self) -> Scale {
        self.scale
    }

    /// Extends the cache through degree `n`.
    pub fn fill(&mut self, n: usize) {
        while self.cache.len() <= n {
            let k = self.cache.len() - 1;
            let (a, b) = recurrence_coefficients(self.scale, k as u64);
            let next = &self.cache[k].mul_x_minus(&a) - &self.cache[k - 1].scale(&b);
            self.cache.push(next);
        }
    }

    pub fn get(&mut self, n: usize) -> &RatPoly {
        self.fill(n);
        &self.cache[n]
    }

    /// Filled prefix; index = degree.
    pub fn polys(&self) -> &[RatPoly] {
        &self.cache
    }
}

pub fn atkin(n: usize) -> RatPoly {
    AtkinFamily::new(Scale::Original).get(n).clone()
}

pub fn atkin_normalized(n: usize) -> RatPoly {
    AtkinFamily::new(Scale::Normalized).get(n).clone()
}

/// `A_n(1728 y) / 1728^n`.
pub fn normalize(original: &RatPoly) -> RatPoly {
    let n = original.degree().unwrap_or(0) as u32;
    let scale = Rational::integer(J_MAX);
    original
        .affine_substitute(&scale, &Rational::zero())
        .expect("nonzero scale")
        .scale(&scale.pow(n).recip().expect("nonzero"))
}

/// Birth and death rates `(lambda_n, mu_n)` of the normalized family.
pub fn atkin_rates(n: u64) -> Result<(Rational, Rational)> {
    if n == 0 {
        return Err(Error::DomainError("atkin_rates requires n >= 1".into()));
    }
    let nr = Rational::integer(n as i64);
    let n_i = n as i64;
    let lambda = (&nr - q(1, 12)) * (&nr + q(5, 12)) / (2 * n_i * (2 * n_i + 1));
    let mu = (&nr - q(5, 12)) * (&nr + q(1, 12)) / (2 * n_i * (2 * n_i - 1));
    Ok((lambda, mu))
}

/// Normalized Atkin polynomial from the double binomial sum
/// `sum_i sum_m (-1)^m C(-1/12, i-m) C(-5/12, i-m) C(n+1/12, m) C(n-7/12, m) / C(2n-1, m) x^(n-i)`.
pub fn kz_explicit(n: usize) -> RatPoly {
    let nr = Rational::integer(n as i64);
    let upper_a = &nr + q(1, 12);
    let upper_b = &nr - q(7, 12);
    let upper_c = Rational::integer(2 * n as i64 - 1);
    let mut coeffs = vec![Rational::zero(); n + 1];
    for i in 0..=n as u64 {
        let mut sum = Rational::zero();
        for m in 0..=i {
            let term = gen_binom(&q(-1, 12), i - m)
                * gen_binom(&q(-5, 12), i - m)
                * gen_binom(&upper_a, m)
                * gen_binom(&upper_b, m)
                / gen_binom(&upper_c, m);
            if m % 2 == 0 {
                sum += term;
            } else {
                sum -= term;
            }
        }
        coeffs[n - i as usize] = sum;
    }
    RatPoly::new(coeffs)
}

/// `A_n(0)` of the normalized family for `n >= 1`:
/// `A_{m+1}(0) = (-1)^m (-5/12) (11/12)_m (17/12)_m / (2m+1)!`.
pub fn atkin_at_zero(n: u64) -> Result<Rational> {
    let m = n
        .checked_sub(1)
        .ok_or_else(|| Error::DomainError("atkin_at_zero requires n >= 1".into()))?;
    let v = q(-5, 12) * pochhammer(&q(11, 12), m) * pochhammer(&q(17, 12), m)
        / Rational::from(factorial(2 * m + 1));
    Ok(if m % 2 == 0 { v } else { -v })
}

/// `A_n(1)` of the normalized family for `n >= 1`:
/// `A_{m+1}(1) = (7/12) (11/12)_m (19/12)_m / (2m+1)!`.
pub fn atkin_at_one(n: u64) -> Result<Rational> {
    let m = n
        .checked_sub(1)
        .ok_or_else(|| Error::DomainError("atkin_at_one requires n >= 1".into()))?;
    Ok(q(7, 12) * pochhammer(&q(11, 12), m) * pochhammer(&q(19, 12), m)
        / Rational::from(factorial(2 * m + 1)))
}

/// Evaluates degrees `0..=n` at `x` in double precision through the
/// recurrence. Stable on the orthogonality interval, unlike Horner on the
/// expanded coefficients.
pub fn eval_all_f64(scale: Scale, n: usize, x: f64) -> Vec<f64> {
    let mut out = Vec::with_capacity(n + 1);
    out.push(1.0);
    if n == 0 {
        return out;
    }
    let (a0, _) = recurrence_coefficients(scale, 0);
    out.push(x - a0.to_f64());
    for k in 1..n {
        let (a, b) = recurrence_coefficients(scale, k as u64);
        let next = (x - a.to_f64()) * out[k] - b.to_f64() * out[k - 1];
        out.push(next);
    }
    out
}

/// Exact values of degrees `0..=n` at `x` through the recurrence, without
/// expanding any polynomial.
pub fn eval_all_exact(scale: Scale, n: usize, x: &Rational) -> Vec<Rational> {
    let mut out = Vec::with_capacity(n + 1);
    out.push(Rational::one());
    if n == 0 {
        return out;
    }
    let (a0, _) = recurrence_coefficients(scale, 0);
    out.push(x - a0);
    for k in 1..n {
        let (a, b) = recurrence_coefficients(scale, k as u64);
        let next = (x - a) * &out[k] - b * &out[k - 1];
        out.push(next);
    }
    out
}

pub fn eval_f64(scale: Scale, n: usize, x: f64) -> f64 {
    eval_all_f64(scale, n, x)[n]
}

/// Float recurrence coefficients, cached for repeated evaluation.
#[derive(Debug, Clone)]
pub struct FloatRecurrence {
    a: Vec<f64>,
    b: Vec<f64>,
}

impl FloatRecurrence {
    pub fn new(scale: Scale, max_degree: usize) -> Self {
        let (a, b) = (0..max_degree.max(1))
            .map(|k| {
                let (a, b) = recurrence_coefficients(scale, k as u64);
                (a.to_f64(), b.to_f64())
            })
            .unzip();
        FloatRecurrence { a, b }
    }

    pub fn max_degree(&self) -> usize {
        self.a.len()
    }

    /// Values of degrees `0..out.len()` at `x`.
    pub fn eval_into(&self, x: f64, out: &mut [f64]) {
        if out.is_empty() {
            return;
        }
        out[0] = 1.0;
        if out.len() > 1 {
            out[1] = x - self.a[0];
        }
        for k in 1..out.len() - 1 {
            out[k + 1] = (x - self.a[k]) * out[k] - self.b[k] * out[k - 1];
        }
    }
}

/// Roots of the normalized polynomials of degree `1..=n_max`, each located by
/// bisection inside the brackets formed by the previous degree's roots and
/// the endpoints 0 and 1.
///
/// A sign change in every bracket proves, degree by degree, that the roots
/// are real, simple, inside `(0, 1)` and interlacing. Probe points are
/// doubles converted exactly to rationals; bisection stops once the bracket
/// is narrower than `tol`.
pub fn interlaced_roots(n_max: usize, tol: f64) -> Result<Vec<Vec<f64>>> {
    let mut family = AtkinFamily::new(Scale::Normalized);
    family.fill(n_max);
    let sign_at = |p: &RatPoly, x: f64| -> i32 {
        let v = p.eval(&Rational::from_f64(x).expect("finite probe"));
        if v.is_zero() {
            0
        } else if v.is_negative() {
            -1
        } else {
            1
        }
    };
    let mut all: Vec<Vec<f64>> = vec![Vec::new()];
    for n in 1..=n_max {
        let p = &family.polys()[n];
        let prev = &all[n - 1];
        let mut edges = Vec::with_capacity(prev.len() + 2);
        edges.push(0.0);
        edges.extend_from_slice(prev);
        edges.push(1.0);
        let mut roots = Vec::with_capacity(n);
        for w in edges.windows(2) {
            let (mut lo, mut hi) = (w[0], w[1]);
            let (s_lo, s_hi) = (sign_at(p, lo), sign_at(p, hi));
            if s_lo == 0 || s_hi == 0 || s_lo == s_hi {
                return Err(Error::InternalInconsistency(format!(
                    "degree {n}: no sign change on [{lo}, {hi}]"
                )));
            }
            while hi - lo > tol {
                let mid = 0.5 * (lo + hi);
                if mid <= lo || mid >= hi {
                    break;
                }
                let s = sign_at(p, mid);
                if s == 0 {
                    lo = mid;
                    hi = mid;
                    break;
                }
                if s == s_lo {
                    lo = mid;
                } else {
                    hi = mid;
                }
            }
            roots.push(0.5 * (lo + hi));
        }
        all.push(roots);
    }
    Ok(all)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn poly(cs: &[(i64, i64)]) -> RatPoly {
        RatPoly::new(cs.iter().map(|&(n, d)| q(n, d)).collect())
    }

    #[test]
    fn seeded_original() {
        assert_eq!(atkin(0), RatPoly::one());
        assert_eq!(atkin(1), poly(&[(-720, 1), (1, 1)]));
        assert_eq!(atkin(2), poly(&[(269280, 1), (-1640, 1), (1, 1)]));
    }

    #[test]
    fn normalized_examples() {
        assert_eq!(atkin_normalized(1), poly(&[(-5, 12), (1, 1)]));
        assert_eq!(
            atkin_normalized(2),
            poly(&[(935, 10368), (-205, 216), (1, 1)])
        );
        assert_eq!(
            atkin_normalized(3),
            poly(&[(-124729, 5971968), (28277, 55296), (-131, 90), (1, 1)])
        );
    }

    #[test]
    fn seeded_degree_two_matches_recurrence_extension() {
        // a_1, b_1 reproduce the seeded A_2 from A_1, A_0
        for scale in [Scale::Original, Scale::Normalized] {
            let mut fam = AtkinFamily::new(scale);
            let (a1, b1) = recurrence_coefficients(scale, 1);
            let rebuilt = &fam.get(1).mul_x_minus(&a1) - &fam.get(0).scale(&b1);
            assert_eq!(&rebuilt, fam.get(2));
        }
    }

    #[test]
    fn rescaling_maps_families() {
        let mut orig = AtkinFamily::new(Scale::Original);
        let mut norm = AtkinFamily::new(Scale::Normalized);
        for n in 0..=30 {
            let o = orig.get(n).clone();
            assert!(o.is_monic());
            assert_eq!(o.degree(), Some(n));
            assert_eq!(&normalize(&o), norm.get(n), "n = {n}");
        }
    }

    #[test]
    fn rates_examples() {
        let (l1, m1) = atkin_rates(1).unwrap();
        assert_eq!(l1, q(187, 864));
        assert_eq!(m1, q(91, 288));
        assert_eq!(&l1 + &m1, q(115, 216));
        assert!(atkin_rates(0).is_err());
        for n in 1..=50 {
            let (l, m) = atkin_rates(n).unwrap();
            assert!(!l.is_negative() && !l.is_zero());
            assert!(!m.is_negative() && !m.is_zero());
        }
    }

    #[test]
    fn kz_matches_recurrence() {
        assert_eq!(kz_explicit(0), RatPoly::one());
        assert_eq!(kz_explicit(1), poly(&[(-5, 12), (1, 1)]));
        assert_eq!(kz_explicit(2), poly(&[(935, 10368), (-205, 216), (1, 1)]));
        let mut fam = AtkinFamily::new(Scale::Normalized);
        for n in 0..=20 {
            assert_eq!(&kz_explicit(n), fam.get(n), "n = {n}");
        }
    }

    #[test]
    fn special_values() {
        assert_eq!(atkin_at_zero(1).unwrap(), q(-5, 12));
        assert_eq!(atkin_at_zero(2).unwrap(), q(935, 10368));
        assert_eq!(atkin_at_zero(3).unwrap(), q(-124729, 5971968));
        assert_eq!(atkin_at_one(1).unwrap(), q(7, 12));
        assert_eq!(atkin_at_one(2).unwrap(), q(1463, 10368));
        assert_eq!(
            atkin_at_one(2).unwrap(),
            q(7, 12) * q(11, 12) * q(19, 12) / 6
        );
        assert!(atkin_at_zero(0).is_err());
        let mut fam = AtkinFamily::new(Scale::Normalized);
        for n in 1..=30u64 {
            let p = fam.get(n as usize);
            assert_eq!(p.eval(&Rational::zero()), atkin_at_zero(n).unwrap());
            assert_eq!(p.eval(&Rational::one()), atkin_at_one(n).unwrap());
        }
    }

    #[test]
    fn float_recurrence_tracks_exact() {
        let mut fam = AtkinFamily::new(Scale::Normalized);
        let rec = FloatRecurrence::new(Scale::Normalized, 12);
        let mut buf = vec![0.0; 13];
        for &x in &[0.05, 0.3, 0.77, 0.99] {
            rec.eval_into(x, &mut buf);
            for (n, &v) in buf.iter().enumerate() {
                let exact = fam.get(n).eval(&Rational::from_f64(x).unwrap()).to_f64();
                // values scale like 4^-n on the interval
                let envelope = 4f64.powi(-(n as i32)).max(exact.abs());
                assert!((v - exact).abs() <= 1e-12 * envelope, "n={n} x={x}: {v} vs {exact}");
            }
            assert_eq!(eval_all_f64(Scale::Normalized, 12, x), buf);
        }
    }

    #[test]
    fn roots_interlace_in_unit_interval() {
        let roots = interlaced_roots(16, 1e-12).unwrap();
        for n in 1..=15 {
            let r = &roots[n];
            assert_eq!(r.len(), n);
            assert!(r[0] > 0.0 && r[n - 1] < 1.0);
            for w in r.windows(2) {
                assert!(w[1] - w[0] > 1e-9, "degree {n} roots too close");
            }
            let next = &roots[n + 1];
            for i in 0..n {
                assert!(next[i] < r[i] && r[i] < next[i + 1]);
            }
        }
    }
}
