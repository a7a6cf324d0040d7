//! Hypergeometric series: exact terminating `pFq` over [`Rational`] and
//! real-argument `2F1` in double precision.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exact::Rational;
use crate::gamma::{gamma_signed, recip_gamma};

/// Parameters and argument of `pFq(numerator; denominator; argument)`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct HypSeriesSpec<T> {
    pub numerator: Vec<T>,
    pub denominator: Vec<T>,
    pub argument: T,
}

impl<T> HypSeriesSpec<T> {
    pub fn new(numerator: Vec<T>, denominator: Vec<T>, argument: T) -> Self {
        HypSeriesSpec { numerator, denominator, argument }
    }
}

/// Exact value of a terminating series.
///
/// The series stops after the term of index `N`, where `-N` is the largest
/// nonpositive integer among the numerator parameters. Terms are generated
/// left to right by their consecutive ratio.
pub fn pfq_terminating(spec: &HypSeriesSpec<Rational>) -> Result<Rational> {
    let last = spec
        .numerator
        .iter()
        .filter_map(Rational::as_nonpositive_integer)
        .min()
        .ok_or_else(|| Error::NonConvergent("no nonpositive integer numerator parameter".into()))?;
    let mut term = Rational::one();
    let mut sum = Rational::one();
    for k in 0..last {
        let kq = Rational::integer(k as i64);
        let mut num = spec.argument.clone();
        for a in &spec.numerator {
            num *= a + &kq;
        }
        let mut den = Rational::integer(k as i64 + 1);
        for b in &spec.denominator {
            den *= b + &kq;
        }
        if den.is_zero() {
            return Err(Error::DenominatorPole { term: k as usize + 1 });
        }
        term = term * num / den;
        if term.is_zero() {
            break;
        }
        sum += &term;
    }
    Ok(sum)
}

/// Terminating `pFq` at argument 1.
pub fn pfq_at_one(numerator: Vec<Rational>, denominator: Vec<Rational>) -> Result<Rational> {
    pfq_terminating(&HypSeriesSpec::new(numerator, denominator, Rational::one()))
}

/// A double-precision value with a bound on its truncation and rounding error.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RealValue {
    pub value: f64,
    pub abs_error_estimate: f64,
}

impl RealValue {
    pub fn exact(value: f64) -> Self {
        RealValue { value, abs_error_estimate: 0.0 }
    }

    fn scaled(self, factor: f64) -> Self {
        RealValue {
            value: self.value * factor,
            abs_error_estimate: self.abs_error_estimate * factor.abs(),
        }
    }
}

/// Series are abandoned beyond this many terms.
pub const MAX_TERMS: usize = 1_000_000;

/// Default relative tolerance for `2F1` evaluation.
pub const DEFAULT_TOL: f64 = 1e-15;

fn is_nonpositive_integer(x: f64) -> bool {
    x <= 0.0 && x == x.round()
}

fn is_integer(x: f64) -> bool {
    x == x.round()
}

/// Gauss hypergeometric function `2F1(a, b; c; x)` for real `x <= 1`.
///
/// `x` in `[0, 1/2)` sums the series directly; `x < 0` goes through the
/// Pfaff transformation; `x` in `[1/2, 1)` uses the `x -> 1 - x` connection
/// formula; `x = 1` uses Gauss summation when `c - a - b > 0`.
pub fn f21_real(a: f64, b: f64, c: f64, x: f64, tol: f64) -> Result<RealValue> {
    f21_with_complement(a, b, c, x, 1.0 - x, tol)
}

/// As [`f21_real`], with `1 - x` supplied by the caller so that arguments
/// near 1 keep their full relative precision.
pub fn f21_with_complement(a: f64, b: f64, c: f64, x: f64, xc: f64, tol: f64) -> Result<RealValue> {
    if !(x.is_finite() && a.is_finite() && b.is_finite() && c.is_finite()) {
        return Err(Error::NonConvergent(format!("non-finite input to 2F1({a}, {b}; {c}; {x})")));
    }
    let terminating = [a, b]
        .into_iter()
        .filter(|&p| is_nonpositive_integer(p))
        .map(|p| (-p) as u64)
        .min();
    if is_nonpositive_integer(c) {
        // a pole of (c)_k is reached at k = 1 - c unless the series stops first
        match terminating {
            Some(n) if n < (1.0 - c) as u64 => {}
            _ => {
                return Err(Error::NonConvergent(format!(
                    "denominator parameter {c} is a nonpositive integer"
                )))
            }
        }
    }
    if let Some(n) = terminating {
        return Ok(finite_sum(a, b, c, x, n));
    }
    if x == 0.0 {
        return Ok(RealValue::exact(1.0));
    }
    if x > 1.0 {
        return Err(Error::NonConvergent(format!("argument {x} > 1")));
    }
    if xc == 0.0 || x == 1.0 {
        return gauss_sum(a, b, c);
    }
    if x < 0.0 {
        // Pfaff: (1-x)^(-a) 2F1(a, c-b; c; x/(x-1))
        let z = x / (x - 1.0);
        let zc = 1.0 / xc;
        let inner = f21_with_complement(a, c - b, c, z, zc, tol)?;
        return Ok(inner.scaled(xc.powf(-a)));
    }
    if x < 0.5 {
        return series(a, b, c, x, tol);
    }
    let s = c - a - b;
    if is_integer(s) {
        // connection coefficients degenerate; the direct series still converges
        return series(a, b, c, x, tol);
    }
    connection(a, b, c, xc, tol)
}

/// `d/dx 2F1(a, b; c; x) = (ab/c) 2F1(a+1, b+1; c+1; x)`.
pub fn f21_derivative(a: f64, b: f64, c: f64, x: f64, xc: f64, tol: f64) -> Result<RealValue> {
    let inner = f21_with_complement(a + 1.0, b + 1.0, c + 1.0, x, xc, tol)?;
    Ok(inner.scaled(a * b / c))
}

fn finite_sum(a: f64, b: f64, c: f64, x: f64, last: u64) -> RealValue {
    let mut term = 1.0;
    let mut sum = 1.0;
    let mut abs_sum = 1.0;
    for k in 0..last {
        let kf = k as f64;
        term *= (a + kf) * (b + kf) / ((c + kf) * (kf + 1.0)) * x;
        sum += term;
        abs_sum += term.abs();
    }
    RealValue { value: sum, abs_error_estimate: 4.0 * f64::EPSILON * abs_sum }
}

fn series(a: f64, b: f64, c: f64, x: f64, tol: f64) -> Result<RealValue> {
    let ax = x.abs();
    // beyond this index the term ratio is monotone, so the geometric tail bound holds
    let k_monotone = 2.0 * (a.abs() + b.abs() + c.abs()) + 2.0;
    let mut term = 1.0_f64;
    let mut sum = 1.0_f64;
    let mut abs_sum = 1.0_f64;
    for k in 0..MAX_TERMS {
        let kf = k as f64;
        term *= (a + kf) * (b + kf) / ((c + kf) * (kf + 1.0)) * x;
        sum += term;
        abs_sum += term.abs();
        if term == 0.0 {
            return Ok(RealValue { value: sum, abs_error_estimate: 4.0 * f64::EPSILON * abs_sum });
        }
        if kf + 1.0 >= k_monotone {
            let k1 = kf + 1.0;
            let factor = ((a + k1) * (b + k1) / ((c + k1) * (k1 + 1.0))).abs();
            let rho = ax * factor.max(1.0);
            if rho < 1.0 {
                let tail = term.abs() * rho / (1.0 - rho);
                if tail <= tol * sum.abs() || tail <= f64::EPSILON * abs_sum * 0.25 {
                    return Ok(RealValue {
                        value: sum,
                        abs_error_estimate: tail + 4.0 * f64::EPSILON * abs_sum,
                    });
                }
            }
        }
    }
    Err(Error::NonConvergent(format!(
        "2F1({a}, {b}; {c}; {x}) not converged after {MAX_TERMS} terms"
    )))
}

fn gauss_sum(a: f64, b: f64, c: f64) -> Result<RealValue> {
    let s = c - a - b;
    if s <= 0.0 {
        return Err(Error::NonConvergent(format!(
            "2F1({a}, {b}; {c}; 1) diverges: c - a - b = {s} <= 0"
        )));
    }
    let value = gamma_signed(c) * gamma_signed(s) * recip_gamma(c - a) * recip_gamma(c - b);
    Ok(RealValue { value, abs_error_estimate: 1e-14 * value.abs() })
}

fn connection(a: f64, b: f64, c: f64, xc: f64, tol: f64) -> Result<RealValue> {
    let s = c - a - b;
    let gc = gamma_signed(c);
    let coeff1 = gc * gamma_signed(s) * recip_gamma(c - a) * recip_gamma(c - b);
    let coeff2 = gc * gamma_signed(-s) * recip_gamma(a) * recip_gamma(b);
    let mut value = 0.0;
    let mut err = 0.0;
    if coeff1 != 0.0 {
        let f1 = series(a, b, 1.0 - s, xc, tol)?;
        value += coeff1 * f1.value;
        err += (coeff1 * f1.abs_error_estimate).abs() + 1e-14 * (coeff1 * f1.value).abs();
    }
    if coeff2 != 0.0 {
        let f2 = series(c - a, c - b, 1.0 + s, xc, tol)?;
        let pre = coeff2 * xc.powf(s);
        value += pre * f2.value;
        err += (pre * f2.abs_error_estimate).abs() + 1e-14 * (pre * f2.value).abs();
    }
    Ok(RealValue { value, abs_error_estimate: err })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::q;

    fn r(n: i64) -> Rational {
        Rational::integer(n)
    }

    #[test]
    fn terminating_examples() {
        let z = q(3, 7);
        let b = q(5, 4);
        let c = q(2, 3);
        let zero = HypSeriesSpec::new(vec![r(0), b.clone()], vec![c.clone()], z.clone());
        assert_eq!(pfq_terminating(&zero).unwrap(), Rational::one());
        let one = HypSeriesSpec::new(vec![r(-1), b.clone()], vec![c.clone()], z.clone());
        assert_eq!(pfq_terminating(&one).unwrap(), Rational::one() - &b * &z / &c);
        assert_eq!(
            pfq_at_one(vec![r(0), r(2), q(7, 12)], vec![q(19, 12), r(2)]).unwrap(),
            Rational::one()
        );
    }

    #[test]
    fn chu_vandermonde() {
        // 2F1(-n, b; c; 1) = (c-b)_n / (c)_n
        use crate::exact::pochhammer;
        for n in 0..8u64 {
            let b = q(7, 5);
            let c = q(-1, 3);
            let lhs = pfq_at_one(vec![r(-(n as i64)), b.clone()], vec![c.clone()]).unwrap();
            let rhs = pochhammer(&(&c - &b), n) / pochhammer(&c, n);
            assert_eq!(lhs, rhs);
        }
    }

    #[test]
    fn terminating_errors() {
        let no_stop = HypSeriesSpec::new(vec![q(1, 2)], vec![q(3, 2)], q(1, 2));
        assert!(matches!(pfq_terminating(&no_stop), Err(Error::NonConvergent(_))));
        let pole = HypSeriesSpec::new(vec![r(-3)], vec![r(-1)], Rational::one());
        assert_eq!(pfq_terminating(&pole), Err(Error::DenominatorPole { term: 2 }));
        // the pole is never reached when the series stops first
        let safe = HypSeriesSpec::new(vec![r(-1)], vec![r(-1)], Rational::one());
        assert_eq!(pfq_terminating(&safe).unwrap(), r(2));
    }

    #[test]
    fn real_examples() {
        assert_eq!(f21_real(0.3, 0.7, 1.1, 0.0, DEFAULT_TOL).unwrap().value, 1.0);
        let v = f21_real(1.0, 1.0, 2.0, 0.5, DEFAULT_TOL).unwrap();
        assert!((v.value - 2.0 * 2f64.ln()).abs() < 1e-14);
        assert!(v.abs_error_estimate < 1e-13);
    }

    #[test]
    fn elementary_closed_forms() {
        // -ln(1-x)/x on both sides of 1/2 and for negative x
        for &x in &[-0.9, -0.3, 0.2, 0.49, 0.5, 0.75, 0.95, 0.999] {
            let v = f21_real(1.0, 1.0, 2.0, x, DEFAULT_TOL).unwrap().value;
            let want = -(-x).ln_1p() / x;
            assert!((v - want).abs() < 1e-12 * want.abs(), "x = {x}: {v} vs {want}");
        }
        // (1-x)^(-a) = 2F1(a, b; b; x)
        for &x in &[-2.0, -0.4, 0.3, 0.6, 0.97] {
            let v = f21_real(0.37, 1.3, 1.3, x, DEFAULT_TOL).unwrap().value;
            let want = (1.0 - x).powf(-0.37);
            assert!((v - want).abs() < 1e-12 * want, "x = {x}");
        }
        // arcsin(sqrt x) / sqrt(x (1-x)) = 2F1(1, 1; 3/2; x)
        for &x in &[0.1, 0.55, 0.8, 0.99] {
            let v = f21_real(1.0, 1.0, 1.5, x, DEFAULT_TOL).unwrap().value;
            let want = x.sqrt().asin() / (x * (1.0 - x)).sqrt();
            assert!((v - want).abs() < 1e-12 * want, "x = {x}");
        }
    }

    #[test]
    fn gauss_summation_matches_series() {
        use crate::gamma::gamma_real;
        let (a, b, c) = (1.0 / 12.0, 1.0 / 12.0, 2.0 / 3.0);
        let at_one = f21_real(a, b, c, 1.0, DEFAULT_TOL).unwrap().value;
        let want = gamma_real(2.0 / 3.0).unwrap() * gamma_real(0.5).unwrap()
            / gamma_real(7.0 / 12.0).unwrap().powi(2);
        assert!((at_one - want).abs() < 1e-13 * want);
        for &(a, b, c) in &[(1.0 / 12.0, 1.0 / 12.0, 2.0 / 3.0), (0.2, 0.3, 1.0), (-0.4, 0.9, 1.1)] {
            let limit = f21_real(a, b, c, 1.0, DEFAULT_TOL).unwrap().value;
            let mut prev = f64::INFINITY;
            for e in 2..=12 {
                let xc = 10f64.powi(-e);
                let v = f21_with_complement(a, b, c, 1.0 - xc, xc, DEFAULT_TOL).unwrap().value;
                let gap = (v - limit).abs();
                assert!(gap <= prev + 1e-15);
                prev = gap;
            }
            assert!(prev < 1e-5 * limit.abs().max(1.0));
        }
    }

    #[test]
    fn terminating_real_any_argument() {
        // 2F1(-2, b; c; x) = 1 - 2bx/c + b(b+1)x^2/(c(c+1))
        let (b, c, x) = (0.7, 1.9, 0.8);
        let v = f21_real(-2.0, b, c, x, DEFAULT_TOL).unwrap().value;
        let want = 1.0 - 2.0 * b * x / c + b * (b + 1.0) * x * x / (c * (c + 1.0));
        assert!((v - want).abs() < 1e-15);
        // pole at (c)_k never reached
        assert!(f21_real(-1.0, 2.0, -3.0, 0.5, DEFAULT_TOL).is_ok());
    }

    #[test]
    fn nonconvergent_cases() {
        assert!(f21_real(0.5, 0.5, 1.0, 1.5, DEFAULT_TOL).is_err());
        assert!(f21_real(0.5, 0.7, 1.0, 1.0, DEFAULT_TOL).is_err());
        assert!(f21_real(0.5, 0.7, -2.0, 0.3, DEFAULT_TOL).is_err());
        assert!(f21_real(0.5, 0.7, 1.1, f64::NAN, DEFAULT_TOL).is_err());
    }

    #[test]
    fn derivative_matches_central_difference() {
        let (a, b, c) = (1.0 / 12.0, 1.0 / 12.0, 2.0 / 3.0);
        for &x in &[0.2, 0.6, 0.9] {
            let h = 1e-5;
            let fd = (f21_real(a, b, c, x + h, DEFAULT_TOL).unwrap().value
                - f21_real(a, b, c, x - h, DEFAULT_TOL).unwrap().value)
                / (2.0 * h);
            let d = f21_derivative(a, b, c, x, 1.0 - x, DEFAULT_TOL).unwrap().value;
            assert!((fd - d).abs() < 1e-8 * d.abs().max(1.0), "x = {x}");
        }
    }
}
