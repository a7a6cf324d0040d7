//! Generating functions: the bilinear `2F1` identity, generating functions of
//! `U_n`, `Y_n`, and the Catalan-weighted generating function of the
//! normalized Atkin polynomials with its `x = 0` and `x = 1` cases.

use serde::{Deserialize, Serialize};

use crate::asymptotic::{c_and_d, u_and_y};
use crate::atkin::{eval_all_exact, eval_all_f64, Scale};
use crate::error::{Error, Result};
use crate::exact::{catalan, factorial, pochhammer, q, Rational};
use crate::hypergeom::{f21_real, DEFAULT_TOL};
use crate::jacobi::AJParams;

/// The two roots `delta <= epsilon` of `t y^2 - (1 + t) y + x`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DeltaEpsilon {
    pub t: f64,
    pub x: f64,
    pub delta: f64,
    pub epsilon: f64,
}

fn discriminant(t: f64, x: f64) -> Result<f64> {
    let disc = (1.0 + t) * (1.0 + t) - 4.0 * x * t;
    if disc < 0.0 {
        Err(Error::ComplexBranch(disc))
    } else {
        Ok(disc)
    }
}

/// `delta` in the cancellation-free form `2x / ((1 + t) + sqrt(disc))`,
/// which is also the `t -> 0` limit `delta = x`.
pub fn delta(t: f64, x: f64) -> Result<f64> {
    let disc = discriminant(t, x)?;
    Ok(2.0 * x / ((1.0 + t) + disc.sqrt()))
}

pub fn delta_eps(t: f64, x: f64) -> Result<DeltaEpsilon> {
    if t == 0.0 {
        return Err(Error::DomainError("delta/epsilon require t != 0".into()));
    }
    let disc = discriminant(t, x)?;
    let epsilon = ((1.0 + t) + disc.sqrt()) / (2.0 * t);
    Ok(DeltaEpsilon { t, x, delta: delta(t, x)?, epsilon })
}

/// A truncated series against its closed form.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct IdentityCheck {
    pub lhs: f64,
    pub rhs: f64,
    pub residual: f64,
}

impl IdentityCheck {
    fn new(lhs: f64, rhs: f64) -> Self {
        IdentityCheck { lhs, rhs, residual: (lhs - rhs).abs() }
    }
}

/// Default truncation for the generating-function checks.
pub const DEFAULT_TERMS: usize = 50;

fn f21(a: f64, b: f64, c: f64, x: f64) -> Result<f64> {
    Ok(f21_real(a, b, c, x, DEFAULT_TOL)?.value)
}

/// Closed form of the bilinear sum in the square-root variables
/// `z_{1,2} = 1 -+ sqrt((1+t)^2 - 4xt)`; valid at `x = 0`.
pub fn fjk_closed_form_z(a: f64, b: f64, d: f64, x: f64, t: f64) -> Result<f64> {
    let root = discriminant(t, x)?.sqrt();
    let z2 = 1.0 + root;
    let dl = delta(t, x)?;
    Ok(((z2 - t) / (z2 + t)).powf(a + d)
        * (2.0 / (z2 - t)).powf(b)
        * f21(-a, b, d, dl)?
        * f21(a + d, a + 1.0, a + b + 1.0, 2.0 * t / (t + z2))?)
}

/// Closed form in terms of `delta`, for `x != 0`:
/// `(x - t delta)^(a+d-b) delta^b / x^(a+d) 2F1(-a, b; d; delta) 2F1(a+d, a+1; a+b+1; t delta / x)`.
pub fn fjk_closed_form_delta(a: f64, b: f64, d: f64, x: f64, t: f64) -> Result<f64> {
    if x == 0.0 {
        return Err(Error::DomainError("the delta form needs x != 0".into()));
    }
    let dl = delta(t, x)?;
    Ok((x - t * dl).powf(a + d - b) * dl.powf(b) / x.powf(a + d)
        * f21(-a, b, d, dl)?
        * f21(a + d, a + 1.0, a + b + 1.0, t * dl / x)?)
}

/// `sum_{n<=N} (d+a)_n (b)_n / (a+b+1)_n 2F1(-n-a, n+b; d; x) (-t)^n / n!`
/// against its closed form (the `z` form at `x = 0`, the `delta` form otherwise).
pub fn fjk_check(a: f64, b: f64, d: f64, x: f64, t: f64, n_terms: usize) -> Result<IdentityCheck> {
    if x >= 1.0 {
        return Err(Error::DomainError(format!("bilinear sum requires x < 1, got {x}")));
    }
    if t.abs() >= 1.0 && (0.0..1.0).contains(&x) {
        return Err(Error::DomainError(format!("bilinear sum requires |t| < 1, got {t}")));
    }
    let mut lhs = 0.0;
    let mut weight = 1.0;
    for n in 0..=n_terms {
        let nf = n as f64;
        if n > 0 {
            weight *= (d + a + nf - 1.0) * (b + nf - 1.0) / ((a + b + nf) * nf) * (-t);
        }
        if weight == 0.0 {
            break;
        }
        lhs += weight * f21(-nf - a, nf + b, d, x)?;
    }
    let rhs = if x == 0.0 {
        fjk_closed_form_z(a, b, d, x, t)?
    } else {
        fjk_closed_form_delta(a, b, d, x, t)?
    };
    Ok(IdentityCheck::new(lhs, rhs))
}

/// Both `U` and `Y` generating functions at one point.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GenUyCheck {
    pub u: IdentityCheck,
    pub y: IdentityCheck,
}

impl GenUyCheck {
    pub fn max_residual(&self) -> f64 {
        self.u.residual.max(self.y.residual)
    }
}

/// `sum_{n<=N} (alpha+beta+c+1)_n (c+1)_n / (alpha+beta+2c+2)_n {U_n, Y_n}(x) t^n / n!`
/// against
/// `delta^(alpha+beta+c+1) / (x^(beta+c+1) (x - t delta)^alpha) 2F1(-c, alpha+beta+c+1; 1+beta; delta) 2F1(beta+c+1, c+1; alpha+beta+2c+2; t delta / x)`
/// and
/// `delta^(alpha+c+1) / (x^(c+1) (x - t delta)^alpha) 2F1(-beta-c, alpha+c+1; 1-beta; delta) 2F1(c+1, beta+c+1; alpha+beta+2c+2; t delta / x)`.
pub fn gen_uy_check(params: &AJParams, x: f64, t: f64, n_terms: usize) -> Result<GenUyCheck> {
    if !(x > 0.0 && x < 1.0) || t.abs() >= 1.0 {
        return Err(Error::DomainError(format!(
            "U/Y generating functions checked for x in (0, 1), |t| < 1; got x = {x}, t = {t}"
        )));
    }
    let (al, be, c) = (params.alpha.to_f64(), params.beta.to_f64(), params.c.to_f64());
    let mut lu = 0.0;
    let mut ly = 0.0;
    let mut weight = 1.0;
    for n in 0..=n_terms {
        let nf = n as f64;
        if n > 0 {
            weight *= (al + be + c + nf) * (c + nf) / ((al + be + 2.0 * c + 1.0 + nf) * nf) * t;
        }
        if weight == 0.0 {
            break;
        }
        let (u, y) = u_and_y(n as u64, params, x)?;
        lu += weight * u.value;
        ly += weight * y.value;
    }
    let dl = delta(t, x)?;
    let base = x - t * dl;
    if base <= 0.0 {
        return Err(Error::DomainError(format!("x - t delta = {base} <= 0")));
    }
    let tail = t * dl / x;
    let ru = dl.powf(al + be + c + 1.0) / (x.powf(be + c + 1.0) * base.powf(al))
        * f21(-c, al + be + c + 1.0, 1.0 + be, dl)?
        * f21(be + c + 1.0, c + 1.0, al + be + 2.0 * c + 2.0, tail)?;
    let ry = dl.powf(al + c + 1.0) / (x.powf(c + 1.0) * base.powf(al))
        * f21(-be - c, al + c + 1.0, 1.0 - be, dl)?
        * f21(c + 1.0, be + c + 1.0, al + be + 2.0 * c + 2.0, tail)?;
    Ok(GenUyCheck { u: IdentityCheck::new(lu, ru), y: IdentityCheck::new(ly, ry) })
}

/// Which `D`-term factor to use in the Catalan generating function.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum BgenForm {
    /// `(delta / x)^(2/3)`, which follows from assembling the `U`, `Y`
    /// generating functions.
    #[default]
    Derived,
    /// `(x / delta)^(2/3)` as typeset; off by about `1e-2` at generic points.
    AsPrinted,
}

/// `sum_{n<=N} C_{n+1} A_{n+1}(x) t^n` (normalized) against
/// `delta^(17/12) / (x^(11/12) sqrt(x - t delta)) 2F1(11/12, 19/12; 3; t delta / x)
///  [C(x) 2F1(-7/12, 17/12; 1/3; delta) + D(x) (delta/x)^(2/3) 2F1(1/12, 25/12; 5/3; delta)]`.
pub fn catalan_gen_check(x: f64, t: f64, n_terms: usize, form: BgenForm) -> Result<IdentityCheck> {
    if !(x > 0.0 && x < 1.0) || t.abs() >= 1.0 {
        return Err(Error::DomainError(format!(
            "Catalan generating function requires 0 < x < 1, |t| < 1; got x = {x}, t = {t}"
        )));
    }
    let values = eval_all_f64(Scale::Normalized, n_terms + 1, x);
    let mut lhs = 0.0;
    let mut tp = 1.0;
    for n in 0..=n_terms {
        let cat = Rational::from(catalan(n as u64 + 1)).to_f64();
        lhs += cat * values[n + 1] * tp;
        tp *= t;
    }
    let dl = delta(t, x)?;
    let base = x - t * dl;
    if base <= 0.0 {
        return Err(Error::DomainError(format!("x - t delta = {base} <= 0")));
    }
    let (c, d) = c_and_d(x)?;
    let ratio = match form {
        BgenForm::Derived => (dl / x).powf(2.0 / 3.0),
        BgenForm::AsPrinted => (x / dl).powf(2.0 / 3.0),
    };
    let rhs = dl.powf(17.0 / 12.0) / (x.powf(11.0 / 12.0) * base.sqrt())
        * f21(11.0 / 12.0, 19.0 / 12.0, 3.0, t * dl / x)?
        * (c.value * f21(-7.0 / 12.0, 17.0 / 12.0, 1.0 / 3.0, dl)?
            + d.value * ratio * f21(1.0 / 12.0, 25.0 / 12.0, 5.0 / 3.0, dl)?);
    Ok(IdentityCheck::new(lhs, rhs))
}

fn check_t(t: f64) -> Result<()> {
    if t.abs() < 1.0 {
        Ok(())
    } else {
        Err(Error::DomainError(format!("generating function requires |t| < 1, got {t}")))
    }
}

fn weighted_sum(values: &[Rational], t: f64, n_terms: usize) -> f64 {
    let mut sum = 0.0;
    let mut tp = 1.0;
    for n in 0..=n_terms {
        let w = Rational::from(catalan(n as u64 + 1)) * &values[n + 1];
        sum += w.to_f64() * tp;
        tp *= t;
    }
    sum
}

/// `sum_{n<=N} C_{n+1} A_{n+1}(0) (-t)^n` against `(-5/12) 2F1(11/12, 17/12; 3; t)`,
/// with exact values `A_{n+1}(0)` from the recurrence.
pub fn gen_at_zero(t: f64, n_terms: usize) -> Result<IdentityCheck> {
    check_t(t)?;
    let values = eval_all_exact(Scale::Normalized, n_terms + 1, &Rational::zero());
    let lhs = weighted_sum(&values, -t, n_terms);
    Ok(IdentityCheck::new(lhs, -5.0 / 12.0 * f21(11.0 / 12.0, 17.0 / 12.0, 3.0, t)?))
}

/// `sum_{n<=N} C_{n+1} A_{n+1}(1) t^n` against `(7/12) 2F1(11/12, 19/12; 3; t)`.
pub fn gen_at_one(t: f64, n_terms: usize) -> Result<IdentityCheck> {
    check_t(t)?;
    let values = eval_all_exact(Scale::Normalized, n_terms + 1, &Rational::one());
    let lhs = weighted_sum(&values, t, n_terms);
    Ok(IdentityCheck::new(lhs, 7.0 / 12.0 * f21(11.0 / 12.0, 19.0 / 12.0, 3.0, t)?))
}

/// The untransformed form at `x = 0`:
/// `sum_{n<=N} C_{n+1} A_{n+1}(0) t^n` against
/// `-5 / (12 (1+t)^(11/12)) 2F1(11/12, 19/12; 3; t / (1+t))`.
///
/// Its right side at `t` equals the [`gen_at_zero`] right side at `-t` by
/// the Pfaff transformation; [`gen0_pfaff_gap`] measures that directly.
pub fn gen0t_check(t: f64, n_terms: usize) -> Result<IdentityCheck> {
    check_t(t)?;
    let values = eval_all_exact(Scale::Normalized, n_terms + 1, &Rational::zero());
    let lhs = weighted_sum(&values, t, n_terms);
    Ok(IdentityCheck::new(lhs, gen0t_rhs(t)?))
}

fn gen0t_rhs(t: f64) -> Result<f64> {
    Ok(-5.0 / (12.0 * (1.0 + t).powf(11.0 / 12.0)) * f21(11.0 / 12.0, 19.0 / 12.0, 3.0, t / (1.0 + t))?)
}

/// `|rhs_gen0t(t) - rhs_gen0(-t)|`.
pub fn gen0_pfaff_gap(t: f64) -> Result<f64> {
    check_t(t)?;
    let other = -5.0 / 12.0 * f21(11.0 / 12.0, 17.0 / 12.0, 3.0, -t)?;
    Ok((gen0t_rhs(t)? - other).abs())
}

/// Exact `t^n` coefficients of the `x = 0` generating function:
/// `(C_{n+1} (-1)^n A_{n+1}(0), (-5/12) (11/12)_n (17/12)_n / ((3)_n n!))`.
pub fn gen0_coefficients(n_max: usize) -> Vec<(Rational, Rational)> {
    let values = eval_all_exact(Scale::Normalized, n_max + 1, &Rational::zero());
    (0..=n_max)
        .map(|n| {
            let nn = n as u64;
            let lhs = Rational::from(catalan(nn + 1)) * &values[n + 1];
            let lhs = if n % 2 == 1 { -lhs } else { lhs };
            let rhs = q(-5, 12) * pochhammer(&q(11, 12), nn) * pochhammer(&q(17, 12), nn)
                / (pochhammer(&Rational::integer(3), nn) * Rational::from(factorial(nn)));
            (lhs, rhs)
        })
        .collect()
}

/// Exact `t^n` coefficients of the `x = 1` generating function:
/// `(C_{n+1} A_{n+1}(1), (7/12) (11/12)_n (19/12)_n / ((3)_n n!))`.
pub fn gen1_coefficients(n_max: usize) -> Vec<(Rational, Rational)> {
    let values = eval_all_exact(Scale::Normalized, n_max + 1, &Rational::one());
    (0..=n_max)
        .map(|n| {
            let nn = n as u64;
            let lhs = Rational::from(catalan(nn + 1)) * &values[n + 1];
            let rhs = q(7, 12) * pochhammer(&q(11, 12), nn) * pochhammer(&q(19, 12), nn)
                / (pochhammer(&Rational::integer(3), nn) * Rational::from(factorial(nn)));
            (lhs, rhs)
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::jacobi::s_set;

    #[test]
    fn delta_examples() {
        assert_eq!(delta(0.4, 0.0).unwrap(), 0.0);
        assert!((delta(0.4, 1.0).unwrap() - 1.0).abs() < 1e-15);
        let de = delta_eps(0.2, 0.3).unwrap();
        assert!((de.delta * de.epsilon - 1.5).abs() < 1e-14);
        assert!(delta_eps(0.0, 0.3).is_err());
        assert!(matches!(delta_eps(0.5, 2.0), Err(Error::ComplexBranch(_))));
        assert_eq!(delta(0.0, 0.37).unwrap(), 0.37);
    }

    #[test]
    fn fjk_trivial_and_standard() {
        let c = fjk_check(0.3, 1.1, 0.9, 0.25, 0.0, 10).unwrap();
        assert!((c.lhs - f21(-0.3, 1.1, 0.9, 0.25).unwrap()).abs() < 1e-15);
        assert!(c.residual < 1e-14);
        let c = fjk_check(0.3, 1.1, 0.9, 0.25, 0.2, 60).unwrap();
        assert!(c.residual <= 1e-10, "{c:?}");
        let z = fjk_check(0.3, 1.1, 0.9, 0.0, 0.3, 60).unwrap();
        assert!(z.residual <= 1e-10, "{z:?}");
    }

    #[test]
    fn fjk_forms_agree() {
        for &(x, t) in &[(0.25, 0.2), (0.6, -0.3), (0.9, 0.5)] {
            let a = fjk_closed_form_z(0.3, 1.1, 0.9, x, t).unwrap();
            let b = fjk_closed_form_delta(0.3, 1.1, 0.9, x, t).unwrap();
            assert!((a - b).abs() < 1e-12 * a.abs().max(1.0));
        }
    }

    #[test]
    fn gen_uy_points() {
        let p = &s_set()[1];
        for &(x, t) in &[(0.25, 0.2), (0.6, 0.1)] {
            let c = gen_uy_check(p, x, t, 50).unwrap();
            assert!(c.max_residual() <= 1e-8, "{c:?}");
        }
        let c = gen_uy_check(p, 0.4, 0.0, 50).unwrap();
        assert!(c.max_residual() < 1e-14);
    }

    #[test]
    fn catalan_points() {
        let c = catalan_gen_check(0.3, 0.0, 50, BgenForm::Derived).unwrap();
        assert!((c.lhs - (0.3 - 5.0 / 12.0)).abs() < 1e-15);
        assert!(c.residual < 1e-12);
        for &(x, t) in &[(0.3, 0.2), (0.7, 0.1)] {
            let c = catalan_gen_check(x, t, 50, BgenForm::Derived).unwrap();
            assert!(c.residual <= 1e-8, "{c:?}");
            let printed = catalan_gen_check(x, t, 50, BgenForm::AsPrinted).unwrap();
            assert!(printed.residual > 1e-4, "{printed:?}");
        }
    }

    #[test]
    fn endpoint_generating_functions() {
        let z = gen_at_zero(0.0, 60).unwrap();
        assert!((z.lhs + 5.0 / 12.0).abs() < 1e-15 && z.residual < 1e-15);
        assert!(gen_at_zero(0.5, 60).unwrap().residual < 1e-10);
        let o = gen_at_one(0.0, 60).unwrap();
        assert!((o.lhs - 7.0 / 12.0).abs() < 1e-15);
        assert!(gen_at_one(0.5, 60).unwrap().residual < 1e-10);
        assert!(gen_at_one(-0.5, 60).unwrap().residual < 1e-10);
        assert!(gen0t_check(0.3, 60).unwrap().residual < 1e-10);
        assert!(gen0_pfaff_gap(0.3).unwrap() < 1e-14);
        assert!(gen_at_zero(1.0, 10).is_err());
    }

    #[test]
    fn exact_coefficients() {
        assert!(gen0_coefficients(12).iter().all(|(l, r)| l == r));
        assert!(gen1_coefficients(12).iter().all(|(l, r)| l == r));
    }
}
