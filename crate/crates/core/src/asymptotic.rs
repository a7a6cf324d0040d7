//! The `2F1` solution pair `U_n`, `Y_n` of the associated Jacobi recurrence,
//! the connection coefficients `C(x)`, `D(x)` that assemble the normalized
//! Atkin polynomials from them, and the large-`n` asymptotics.

use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use crate::atkin::{eval_f64, Scale};
use crate::error::{Error, Result};
use crate::gamma::gamma_real;
use crate::hypergeom::{f21_real, f21_with_complement, RealValue, DEFAULT_TOL};
use crate::jacobi::{assoc_calV, assoc_V, monic_factor, s_set, AJParams};

fn f(x: &crate::exact::Rational) -> f64 {
    x.to_f64()
}

/// `alpha, beta, c` as doubles.
fn params_f64(p: &AJParams) -> (f64, f64, f64) {
    (f(&p.alpha), f(&p.beta), f(&p.c))
}

fn rising(a: f64, n: u64) -> f64 {
    (0..n).map(|k| a + k as f64).product()
}

fn sign(n: u64) -> f64 {
    if n.is_multiple_of(2) {
        1.0
    } else {
        -1.0
    }
}

/// `(U_n(x), Y_n(x))`:
///
/// `U_n = (-1)^n (beta+c+1)_n / (c+1)_n * 2F1(-n-c, n+alpha+beta+c+1; 1+beta; x)`,
/// `Y_n = (-1)^n (alpha+c+1)_n / (alpha+beta+c+1)_n * 2F1(-n-beta-c, n+alpha+c+1; 1-beta; x)`.
pub fn u_and_y(n: u64, params: &AJParams, x: f64) -> Result<(RealValue, RealValue)> {
    if !(x > 0.0 && x < 1.0) {
        return Err(Error::DomainError(format!("U_n, Y_n require x in (0, 1), got {x}")));
    }
    let (a, b, c) = params_f64(params);
    let nf = n as f64;
    let fu = f21_real(-nf - c, nf + a + b + c + 1.0, 1.0 + b, x, DEFAULT_TOL)?;
    let fy = f21_real(-nf - b - c, nf + a + c + 1.0, 1.0 - b, x, DEFAULT_TOL)?;
    let pu = sign(n) * rising(b + c + 1.0, n) / rising(c + 1.0, n);
    let py = sign(n) * rising(a + c + 1.0, n) / rising(a + b + c + 1.0, n);
    Ok((scale(fu, pu), scale(fy, py)))
}

fn scale(v: RealValue, s: f64) -> RealValue {
    RealValue { value: v.value * s, abs_error_estimate: v.abs_error_estimate * s.abs() }
}

/// `U_n`, `Y_n` multiplied by the monic factor
/// `(c+1)_n (alpha+beta+c+1)_n / (alpha+beta+2c+1)_{2n}`.
pub fn monic_u_and_y(n: u64, params: &AJParams, x: f64) -> Result<(RealValue, RealValue)> {
    let k = monic_factor(params, n)?.to_f64();
    let (u, y) = u_and_y(n, params, x)?;
    Ok((scale(u, k), scale(y, k)))
}

/// `C(x)` and `D(x)` on `[0, 1]`.
pub fn c_and_d(x: f64) -> Result<(RealValue, RealValue)> {
    c_and_d_with_complement(x, 1.0 - x)
}

/// As [`c_and_d`] with `1 - x` supplied separately.
pub fn c_and_d_with_complement(x: f64, xc: f64) -> Result<(RealValue, RealValue)> {
    if !(0.0..=1.0).contains(&x) {
        return Err(Error::DomainError(format!("C, D require x in [0, 1], got {x}")));
    }
    let t = DEFAULT_TOL;
    let c1 = f21_with_complement(-5.0 / 12.0, -5.0 / 12.0, -1.0 / 3.0, x, xc, t)?;
    let c2 = f21_with_complement(-5.0 / 12.0, -5.0 / 12.0, 2.0 / 3.0, x, xc, t)?;
    let d1 = f21_with_complement(-1.0 / 12.0, -1.0 / 12.0, 1.0 / 3.0, x, xc, t)?;
    let d2 = f21_with_complement(11.0 / 12.0, -1.0 / 12.0, 4.0 / 3.0, x, xc, t)?;
    let cv = RealValue {
        value: -(24.0 * c1.value + c2.value) / 60.0,
        abs_error_estimate: (24.0 * c1.abs_error_estimate + c2.abs_error_estimate) / 60.0,
    };
    let k = 91.0 / 384.0 * x;
    let dv = RealValue {
        value: k * (4.0 * d1.value - 5.0 * d2.value),
        abs_error_estimate: k.abs() * (4.0 * d1.abs_error_estimate + 5.0 * d2.abs_error_estimate),
    };
    Ok((cv, dv))
}

/// `C(x) U~_n(x) + D(x) Y~_n(x)` at `(alpha, beta, c) = (1/2, -2/3, 7/12)`,
/// which reproduces `A_{n+1}(x)` (normalized).
pub fn buv_combination(n: u64, x: f64) -> Result<f64> {
    let (u, y) = monic_u_and_y(n, &s_set()[1], x)?;
    let (c, d) = c_and_d(x)?;
    Ok(c.value * u.value + d.value * y.value)
}

/// `R_n` and its `2F1`-weighted `U/Y` expression, and the same for the
/// second family.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RuvCheck {
    pub n: u64,
    pub x: f64,
    pub r_direct: f64,
    pub r_combination: f64,
    pub cal_r_direct: f64,
    pub cal_r_combination: f64,
}

impl RuvCheck {
    pub fn max_residual(&self) -> f64 {
        (self.r_direct - self.r_combination)
            .abs()
            .max((self.cal_r_direct - self.cal_r_combination).abs())
    }
}

/// Compare `R_n = V_n / k_n` and `CalR_n = CalV_n / k_n` (`k_n` the monic
/// factor) against their expansions in `U_n`, `Y_n`:
///
/// `R_n = (beta+c)(alpha+beta+c)/(beta(alpha+beta+2c)) 2F1(c, 1-alpha-beta-c; 1-beta; x) U_n
///      - c(alpha+c)/(beta(alpha+beta+2c)) 2F1(beta+c, 1-alpha-c; 1+beta; x) Y_n`,
///
/// `CalR_n = 2F1(c, -alpha-beta-c; -beta; x) U_n
///      - c(alpha+c)/(beta(beta+1)) x 2F1(1+beta+c, 1-alpha-c; 2+beta; x) Y_n`.
pub fn ruv_check(n: u64, params: &AJParams, x: f64) -> Result<RuvCheck> {
    let k = monic_factor(params, n)?.to_f64();
    let v = assoc_V(n as usize, params)?.eval_f64(x);
    let cv = assoc_calV(n as usize, params)?.eval_f64(x);
    let (a, b, c) = params_f64(params);
    let (u, y) = u_and_y(n, params, x)?;
    let (u, y) = (u.value, y.value);
    let t = DEFAULT_TOL;
    let s = a + b + 2.0 * c;
    let r_comb = (b + c) * (a + b + c) / (b * s) * f21_real(c, 1.0 - a - b - c, 1.0 - b, x, t)?.value * u
        - c * (a + c) / (b * s) * f21_real(b + c, 1.0 - a - c, 1.0 + b, x, t)?.value * y;
    let cal_comb = f21_real(c, -a - b - c, -b, x, t)?.value * u
        - c * (a + c) / (b * (b + 1.0)) * x * f21_real(1.0 + b + c, 1.0 - a - c, 2.0 + b, x, t)?.value * y;
    Ok(RuvCheck {
        n,
        x,
        r_direct: v / k,
        r_combination: r_comb,
        cal_r_direct: cv / k,
        cal_r_combination: cal_comb,
    })
}

fn check_theta(theta: f64, hi: f64, what: &str) -> Result<()> {
    if theta > 0.0 && theta < hi {
        Ok(())
    } else {
        Err(Error::DomainError(format!("{what} requires theta in (0, {hi}), got {theta}")))
    }
}

/// Large-`n` approximation of `2F1(b-n, n+a; d; sin^2 theta)`:
/// `Gamma(d) n^(1/2-d) / sqrt(pi) * cos^(d-a-b-1/2) theta / sin^(d-1/2) theta
///  * cos(2n theta + (a-b) theta - (pi/2)(d - 1/2))`.
pub fn watson_rhs(a: f64, b: f64, d: f64, theta: f64, n: u64) -> Result<f64> {
    check_theta(theta, PI, "watson_rhs")?;
    if n == 0 {
        return Err(Error::DomainError("watson_rhs requires n >= 1".into()));
    }
    let nf = n as f64;
    let (s, c) = theta.sin_cos();
    let pre = gamma_real(d)? * nf.powf(0.5 - d) / PI.sqrt();
    let phase = 2.0 * nf * theta + (a - b) * theta - PI / 2.0 * (d - 0.5);
    Ok(pre * c.powf(d - a - b - 0.5) / s.powf(d - 0.5) * phase.cos())
}

/// `2F1(b-n, n+a; d; x)` for `n = 0..=n_max`.
///
/// The first two values come from [`f21_real`]; the rest follow from the
/// Jacobi three-term recurrence in `nu = n - b`, which is forward-stable for
/// `x` in `(0, 1)` where both solutions oscillate. Direct summation would
/// lose all digits to cancellation for large `n`.
pub fn f21_degree_family(a: f64, b: f64, d: f64, x: f64, n_max: usize) -> Result<Vec<f64>> {
    let t = DEFAULT_TOL;
    let mut out = vec![f21_real(b, a, d, x, t)?.value];
    if n_max == 0 {
        return Ok(out);
    }
    out.push(f21_real(b - 1.0, a + 1.0, d, x, t)?.value);
    // Jacobi parameters: alpha = d - 1, alpha + beta = a + b - 1
    let al = d - 1.0;
    let ab = a + b - 1.0;
    let be = ab - al;
    let tt = 1.0 - 2.0 * x;
    for n in 1..n_max {
        let nu = n as f64 - b;
        let two = ab + 2.0 * nu;
        let lhs = 2.0 * (nu + ab + 1.0) * two * (nu + al + 1.0);
        let mid = (two + 1.0) * ((al * al - be * be) + tt * (two + 2.0) * two);
        let back = 2.0 * nu * (nu + be) * (two + 2.0);
        if lhs == 0.0 {
            return Err(Error::ParameterDegeneracy {
                index: n as i64,
                what: "degree recurrence denominator vanishes".into(),
            });
        }
        let next = (mid * out[n] - back * out[n - 1]) / lhs;
        out.push(next);
    }
    Ok(out)
}

/// Which version of the Atkin asymptotic formula to evaluate.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum AsymptoticForm {
    /// Consistent with the `U~`, `Y~` asymptotics it is assembled from:
    /// `sin^(4/3)` on the `C` term, phase `2(n+1) theta`, and
    /// `Gamma(5/3) / (Gamma(19/12) Gamma(25/12))` on the `D` term.
    #[default]
    Corrected,
    /// The typeset display: `sin^(2/3)`, phase `2(n-1) theta`,
    /// `Gamma(5/3) / (Gamma(13/12) Gamma(19/12))`.
    AsPrinted,
}

/// The asymptotic value together with its two oscillating factors.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct AsymptoticTerms {
    pub value: f64,
    pub cos_c: f64,
    pub cos_d: f64,
}

/// Leading large-`n` behaviour of `A_{n+1}(sin^2 theta)` (normalized),
/// `theta` in `(0, pi/2)`, in the [`AsymptoticForm::Corrected`] form.
pub fn atkin_asymptotic(n: u64, theta: f64) -> Result<f64> {
    Ok(atkin_asymptotic_terms(n, theta, AsymptoticForm::Corrected)?.value)
}

pub fn atkin_asymptotic_terms(n: u64, theta: f64, form: AsymptoticForm) -> Result<AsymptoticTerms> {
    check_theta(theta, PI / 2.0, "atkin_asymptotic")?;
    let (s, co) = theta.sin_cos();
    let x = s * s;
    let (c, d) = c_and_d_with_complement(x, co * co)?;
    let nf = n as f64;
    let pre = sign(n) * 0.5f64.powi(2 * n as i32 + 1) / (co * s.powf(7.0 / 6.0));
    let (s_pow, shift, d_gamma) = match form {
        AsymptoticForm::Corrected => (4.0 / 3.0, 1.0, gamma_real(25.0 / 12.0)?),
        AsymptoticForm::AsPrinted => (2.0 / 3.0, -1.0, gamma_real(13.0 / 12.0)?),
    };
    let phase = 2.0 * (nf + shift) * theta;
    let cos_c = (phase + PI / 12.0).cos();
    let cos_d = (phase - 7.0 * PI / 12.0).cos();
    let kc = gamma_real(1.0 / 3.0)? / (gamma_real(11.0 / 12.0)? * gamma_real(17.0 / 12.0)?);
    let kd = gamma_real(5.0 / 3.0)? / (d_gamma * gamma_real(19.0 / 12.0)?);
    let value = pre * (c.value * kc * s.powf(s_pow) * cos_c + d.value * kd * cos_d);
    Ok(AsymptoticTerms { value, cos_c, cos_d })
}

/// Asymptotic value against the float recurrence for `A_{n+1}(sin^2 theta)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct AsymptoticCheck {
    pub n: u64,
    pub theta: f64,
    pub form: AsymptoticForm,
    pub approximation: f64,
    pub reference: f64,
    pub relative_error: f64,
    pub cos_c: f64,
    pub cos_d: f64,
}

pub fn asymptotic_check(n: u64, theta: f64, form: AsymptoticForm) -> Result<AsymptoticCheck> {
    let terms = atkin_asymptotic_terms(n, theta, form)?;
    let reference = eval_f64(Scale::Normalized, n as usize + 1, theta.sin().powi(2));
    Ok(AsymptoticCheck {
        n,
        theta,
        form,
        approximation: terms.value,
        reference,
        relative_error: ((terms.value - reference) / reference).abs(),
        cos_c: terms.cos_c,
        cos_d: terms.cos_d,
    })
}
