//! Jacobi and associated Jacobi polynomials, the explicit `4F3` formulas for
//! the two associated families, and the representations of the normalized
//! Atkin polynomials built from them.

use serde::{Deserialize, Serialize};

use crate::atkin::atkin_normalized;
use crate::error::{Error, Result};
use crate::exact::{pochhammer, q, Rational};
use crate::hypergeom::{pfq_at_one, HypSeriesSpec};
use crate::poly::RatPoly;

/// Parameters `(alpha, beta, c)` of an associated Jacobi family.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct AJParams {
    pub alpha: Rational,
    pub beta: Rational,
    pub c: Rational,
}

impl AJParams {
    pub fn new(alpha: Rational, beta: Rational, c: Rational) -> Self {
        AJParams { alpha, beta, c }
    }

    /// `alpha + beta + 2c`.
    pub fn sigma(&self) -> Rational {
        &self.alpha + &self.beta + &self.c * 2
    }

    /// The same `(alpha, beta)` with `c + 1`.
    pub fn shifted(&self) -> AJParams {
        AJParams::new(self.alpha.clone(), self.beta.clone(), &self.c + 1)
    }

    /// Fails with the first index whose recurrence data has a zero
    /// denominator, for degrees up to `n_max`.
    pub fn check_degree(&self, n_max: usize, variant: Variant) -> Result<()> {
        aj_rates(self, 0, variant)?;
        for n in 1..n_max {
            vrec_coefficients(self, n as u64)?;
        }
        Ok(())
    }
}

/// The four parameter triples for which the associated Jacobi recurrence
/// coincides with the shifted normalized Atkin recurrence.
pub fn s_set() -> [AJParams; 4] {
    [
        AJParams::new(q(-1, 2), q(-2, 3), q(13, 12)),
        AJParams::new(q(1, 2), q(-2, 3), q(7, 12)),
        AJParams::new(q(-1, 2), q(2, 3), q(5, 12)),
        AJParams::new(q(1, 2), q(2, 3), q(-1, 12)),
    ]
}

/// Which of the two associated families: `V` keeps the natural `mu_0`,
/// `CalV` sets `mu_0 = 0`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Variant {
    V,
    CalV,
}

fn degenerate(index: i64, what: &str) -> Error {
    Error::ParameterDegeneracy { index, what: what.to_string() }
}

fn div_at(num: Rational, den: Rational, index: i64, what: &str) -> Result<Rational> {
    if den.is_zero() {
        Err(degenerate(index, what))
    } else {
        Ok(num / den)
    }
}

/// Jacobi polynomial `P_n^{(alpha, beta)}(x)`.
///
/// `P_1 = ((alpha - beta) + (alpha + beta + 2) x) / 2` is seeded directly:
/// the `n = 0` step of the three-term recurrence divides by `alpha + beta`.
pub fn jacobi_poly(n: usize, alpha: &Rational, beta: &Rational) -> Result<RatPoly> {
    let ab = alpha + beta;
    let mut prev = RatPoly::one();
    if n == 0 {
        return Ok(prev);
    }
    let mut cur = RatPoly::new(vec![(alpha - beta) / 2, (&ab + 2) / 2]);
    let a2b2 = alpha * alpha - beta * beta;
    for k in 1..n {
        let kq = Rational::integer(k as i64);
        let two_k_ab = &kq * 2 + &ab;
        let den = (&kq + 1) * 2 * (&kq + &ab + 1) * &two_k_ab;
        if den.is_zero() {
            return Err(degenerate(k as i64, "Jacobi recurrence denominator vanishes"));
        }
        let outer = &two_k_ab + 1;
        let lin = RatPoly::new(vec![
            &outer * &a2b2,
            &outer * (&two_k_ab + 2) * &two_k_ab,
        ]);
        let back = (alpha + &kq) * (beta + &kq) * (&two_k_ab + 2) * 2;
        let next = (&(&lin * &cur) - &prev.scale(&back)).scale(&den.recip()?);
        prev = std::mem::replace(&mut cur, next);
    }
    Ok(cur)
}

/// Monic shifted Jacobi polynomial `n! / (n + alpha + beta + 1)_n * P_n(2x - 1)`.
pub fn monic_jacobi(n: usize, alpha: &Rational, beta: &Rational) -> Result<RatPoly> {
    let p = jacobi_poly(n, alpha, beta)?;
    let shifted = p.affine_substitute(&Rational::integer(2), &Rational::integer(-1))?;
    let norm = pochhammer(&(alpha + beta + (n as i64 + 1)), n as u64);
    if norm.is_zero() {
        return Err(degenerate(n as i64, "monic normalization (n+alpha+beta+1)_n vanishes"));
    }
    let nf = Rational::from(crate::exact::factorial(n as u64));
    Ok(shifted.scale(&(nf / norm)))
}

/// Birth and death rates `(lambda_n, mu_n)` of the associated family.
pub fn aj_rates(params: &AJParams, n: u64, variant: Variant) -> Result<(Rational, Rational)> {
    let AJParams { alpha, beta, c } = params;
    let idx = n as i64;
    let nc = c + idx;
    let s = params.sigma() + 2 * idx;
    let lambda = div_at(
        (&nc + beta + 1) * (&nc + alpha + beta + 1),
        (&s + 1) * (&s + 2),
        idx,
        "birth rate denominator vanishes",
    )?;
    let mu = if n == 0 && variant == Variant::CalV {
        Rational::zero()
    } else {
        div_at(&nc * (&nc + alpha), &s * (&s + 1), idx, "death rate denominator vanishes")?
    };
    Ok((lambda, mu))
}

/// Monic recurrence data for `n >= 1`:
/// `T_{n+1} = (x - a_n) T_n - b_n T_{n-1}`, with `a_n = lambda_n + mu_n`.
pub fn vrec_coefficients(params: &AJParams, n: u64) -> Result<(Rational, Rational)> {
    let AJParams { alpha, beta, c } = params;
    let idx = n as i64;
    let s = params.sigma() + 2 * idx;
    let a = div_at(
        &s * (&s + 2) - (alpha * alpha - beta * beta),
        &s * (&s + 2) * 2,
        idx,
        "recurrence diagonal denominator vanishes",
    )?;
    let nc = c + idx;
    let b = div_at(
        &nc * (&nc + alpha) * (&nc + beta) * (&nc + alpha + beta),
        (&s - 1) * &s * &s * (&s + 1),
        idx,
        "recurrence off-diagonal denominator vanishes",
    )?;
    Ok((a, b))
}

/// `V_0 .. V_{n_max}` (or the `CalV` family) by the monic recurrence.
///
/// All recurrence coefficients are computed before any polynomial work so
/// that a degenerate parameter fails with its index up front.
pub fn assoc_family(params: &AJParams, variant: Variant, n_max: usize) -> Result<Vec<RatPoly>> {
    let (l0, m0) = aj_rates(params, 0, variant)?;
    let coeffs = (1..n_max as u64)
        .map(|n| vrec_coefficients(params, n))
        .collect::<Result<Vec<_>>>()?;
    let mut out = vec![RatPoly::one()];
    if n_max == 0 {
        return Ok(out);
    }
    out.push(RatPoly::x_minus(l0 + m0));
    for (i, (a, b)) in coeffs.iter().enumerate() {
        let n = i + 1;
        let next = &out[n].mul_x_minus(a) - &out[n - 1].scale(b);
        out.push(next);
    }
    Ok(out)
}

#[allow(non_snake_case)]
pub fn assoc_V(n: usize, params: &AJParams) -> Result<RatPoly> {
    Ok(assoc_family(params, Variant::V, n)?.pop().expect("family is non-empty"))
}

#[allow(non_snake_case)]
pub fn assoc_calV(n: usize, params: &AJParams) -> Result<RatPoly> {
    Ok(assoc_family(params, Variant::CalV, n)?.pop().expect("family is non-empty"))
}

/// `V_{n-1}(x; c+1)`, with `V_{-1} = 0`.
pub fn second_solution(n: usize, params: &AJParams) -> Result<RatPoly> {
    if n == 0 {
        Ok(RatPoly::zero())
    } else {
        assoc_V(n - 1, &params.shifted())
    }
}

/// `(c+1)_n (alpha+beta+c+1)_n / (alpha+beta+2c+1)_{2n}`, the factor taking
/// the classical `R_n` normalization to the monic one.
pub fn monic_factor(params: &AJParams, n: u64) -> Result<Rational> {
    let AJParams { alpha, beta, c } = params;
    let den = pochhammer(&(params.sigma() + 1), 2 * n);
    div_at(
        pochhammer(&(c + 1), n) * pochhammer(&(alpha + beta + c + 1), n),
        den,
        n as i64,
        "(alpha+beta+2c+1)_{2n} vanishes",
    )
}

fn explicit_4f3(n: usize, params: &AJParams, variant: Variant) -> Result<RatPoly> {
    let AJParams { beta, c, .. } = params;
    let sigma = params.sigma();
    let nn = n as u64;
    let ni = n as i64;
    let pre = div_at(
        pochhammer(&(c + 1), nn) * pochhammer(&(beta + c + 1), nn),
        pochhammer(&(&sigma + (ni + 1)), nn) * Rational::from(crate::exact::factorial(nn)),
        ni,
        "explicit-formula prefactor denominator vanishes",
    )?;
    let pre = if n % 2 == 1 { -pre } else { pre };
    let top = &sigma + (ni + 1);
    let mut coeffs = Vec::with_capacity(n + 1);
    for k in 0..=nn {
        let ki = k as i64;
        let ratio = div_at(
            pochhammer(&Rational::integer(-ni), k) * pochhammer(&top, k),
            pochhammer(&(c + 1), k) * pochhammer(&(c + beta + 1), k),
            ki,
            "explicit-formula coefficient denominator vanishes",
        )?;
        let (third, last_den) = match variant {
            Variant::V => (c + beta, sigma.clone()),
            Variant::CalV => (c + beta + 1, &sigma + 1),
        };
        let spec = HypSeriesSpec::new(
            vec![Rational::integer(ki - ni), &top + ki, third, c.clone()],
            vec![beta + c + (ki + 1), c + (ki + 1), last_den],
            Rational::one(),
        );
        let inner = crate::hypergeom::pfq_terminating(&spec).map_err(|e| match e {
            Error::DenominatorPole { term } => degenerate(ki, &format!("4F3 pole at term {term}")),
            other => other,
        })?;
        coeffs.push(&pre * ratio * inner);
    }
    Ok(RatPoly::new(coeffs))
}

/// `V_n(x; c)` from the explicit `4F3` coefficient formula.
#[allow(non_snake_case)]
pub fn wimp_V_explicit(n: usize, params: &AJParams) -> Result<RatPoly> {
    explicit_4f3(n, params, Variant::V)
}

/// `CalV_n(x; c)` from the explicit `4F3` coefficient formula.
#[allow(non_snake_case)]
pub fn im_calV_explicit(n: usize, params: &AJParams) -> Result<RatPoly> {
    explicit_4f3(n, params, Variant::CalV)
}

/// The three ways of writing `A_{n+1}` (normalized) in terms of associated
/// Jacobi polynomials.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Representation {
    /// `(x - 5/12) V_n(x; c) - kappa V_{n-1}(x; c+1)`, any triple in the set.
    Rep1,
    /// `(x - 8) V_n(x; 5/12) + (91/12) CalV_n(x; 5/12)` at `(-1/2, 2/3)`.
    Rep2,
    /// `x V_n(x; 7/12) - (5/12) CalV_n(x; 7/12)` at `(1/2, -2/3)`.
    Rep3,
}

/// The `Rep1` scalar forced by the monic normalization of both solutions.
pub fn rep1_coefficient() -> Rational {
    q(455, 3456)
}

/// The `Rep1` scalar as typeset in the literature; fails at `n = 1`.
pub fn rep1_coefficient_as_printed() -> Rational {
    q(91, 384)
}

/// `(x - 5/12) V_n(x; c) - kappa V_{n-1}(x; c+1)`.
pub fn rep1_with(n: usize, params: &AJParams, kappa: &Rational) -> Result<RatPoly> {
    let v = assoc_V(n, params)?;
    let w = second_solution(n, params)?;
    Ok(&v.mul_x_minus(&q(5, 12)) - &w.scale(kappa))
}

/// `A_{n+1}` (normalized) through one of the three representations.
/// `rep1_coeff` defaults to [`rep1_coefficient`] and is ignored otherwise.
pub fn atkin_via_representation(
    n: usize,
    which: Representation,
    rep1_coeff: Option<&Rational>,
) -> Result<RatPoly> {
    match which {
        Representation::Rep1 => {
            let kappa = rep1_coeff.cloned().unwrap_or_else(rep1_coefficient);
            rep1_with(n, &s_set()[1], &kappa)
        }
        Representation::Rep2 => {
            let p = &s_set()[2];
            let v = assoc_V(n, p)?;
            let w = assoc_calV(n, p)?;
            Ok(&v.mul_x_minus(&Rational::integer(8)) + &w.scale(&q(91, 12)))
        }
        Representation::Rep3 => {
            let p = &s_set()[1];
            let v = assoc_V(n, p)?;
            let w = assoc_calV(n, p)?;
            Ok(&v.mul_x_minus(&Rational::zero()) - &w.scale(&q(5, 12)))
        }
    }
}

/// Per-degree outcome of solving `Rep1` for its scalar.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Rep1Diagnostic {
    pub n: usize,
    /// `None` when the second solution vanishes (`n = 0`) and any scalar works.
    pub solved_coefficient: Option<Rational>,
    /// The difference `(x - 5/12) V_n - A_{n+1}` is an exact multiple of `V_{n-1}(x; c+1)`.
    pub consistent: bool,
    /// The solved scalar equals the one under test.
    pub matches_tested: bool,
}

/// Solve `(x - 5/12) V_n - A_{n+1} = kappa V_{n-1}(x; c+1)` for `kappa` at each
/// `n <= n_max`, and compare against `tested`.
pub fn rep1_diagnostic(n_max: usize, params: &AJParams, tested: &Rational) -> Result<Vec<Rep1Diagnostic>> {
    let v = assoc_family(params, Variant::V, n_max)?;
    let w = assoc_family(&params.shifted(), Variant::V, n_max.saturating_sub(1))?;
    let mut out = Vec::with_capacity(n_max + 1);
    for n in 0..=n_max {
        let target = atkin_normalized(n + 1);
        let diff = &v[n].mul_x_minus(&q(5, 12)) - &target;
        if n == 0 {
            out.push(Rep1Diagnostic {
                n,
                solved_coefficient: None,
                consistent: diff.is_zero(),
                matches_tested: diff.is_zero(),
            });
            continue;
        }
        let second = &w[n - 1];
        // second is monic of degree n-1, so its leading coefficient reads off kappa
        let kappa = diff.coeff(n - 1);
        let consistent = diff == second.scale(&kappa);
        out.push(Rep1Diagnostic {
            n,
            matches_tested: consistent && &kappa == tested,
            solved_coefficient: Some(kappa),
            consistent,
        });
    }
    Ok(out)
}

fn ourrep_with(n: usize, constant_factor: &Rational) -> Result<RatPoly> {
    let nn = n as u64;
    let ni = n as i64;
    let minus_n = Rational::integer(-ni);
    let top = Rational::integer(ni + 2);
    let pre = pochhammer(&q(19, 12), nn) * pochhammer(&q(11, 12), nn)
        / (pochhammer(&top, nn) * pochhammer(&minus_n, nn));
    let constant = pfq_at_one(
        vec![minus_n.clone(), top.clone(), q(7, 12)],
        vec![q(19, 12), Rational::integer(2)],
    )? * constant_factor;
    let mut coeffs = vec![Rational::zero(); n + 2];
    coeffs[0] = constant;
    for k in 0..=nn {
        let ki = k as i64;
        let ratio = pochhammer(&minus_n, k) * pochhammer(&top, k)
            / (pochhammer(&q(19, 12), k) * pochhammer(&q(11, 12), k));
        let den = vec![q(11, 12) + ki, q(19, 12) + ki, Rational::one()];
        let first = pfq_at_one(
            vec![Rational::integer(ki - ni), Rational::integer(ni + ki + 2), q(11, 12), q(-5, 12)],
            den.clone(),
        )?;
        let second = pfq_at_one(
            vec![Rational::integer(ki - ni), Rational::integer(ni + ki + 2), q(-1, 12), q(-5, 12)],
            den,
        )?;
        coeffs[k as usize + 1] += ratio * (first * q(6, 5) - second * q(1, 5));
    }
    Ok(RatPoly::new(coeffs).scale(&pre))
}

/// `A_{n+1}` (normalized) from the single-sum `4F3` representation.
///
/// The constant term is `-(5/12)` times the `3F2` at 1; the bare `3F2`
/// (see [`ourrep_as_printed`]) does not reproduce the polynomial.
pub fn ourrep_explicit(n: usize) -> Result<RatPoly> {
    ourrep_with(n, &q(-5, 12))
}

/// The same representation with the bare `3F2` constant term.
pub fn ourrep_as_printed(n: usize) -> Result<RatPoly> {
    ourrep_with(n, &Rational::one())
}

/// Both sides of the `4F3` contraction identity at argument 1, for `0 <= k <= n`.
///
/// At `k = n` the second left-hand series has numerator `k + 1 - n = 1` and
/// does not terminate, but its prefactor `(k - n)` is zero, so the term is
/// dropped.
pub fn contraction_4f3y(n: usize, k: usize) -> Result<(Rational, Rational)> {
    if k > n {
        return Err(Error::DomainError(format!("contraction requires k <= n, got k = {k}, n = {n}")));
    }
    let (ni, ki) = (n as i64, k as i64);
    let den = vec![q(11, 12) + ki, q(19, 12) + ki, Rational::one()];
    let mut lhs = pfq_at_one(
        vec![Rational::integer(ki - ni), Rational::integer(ni + ki + 2), q(-1, 12), q(7, 12)],
        den.clone(),
    )?;
    if k < n {
        let scale = q(5, 12) * Rational::integer((ki - ni) * (ni + ki + 2))
            / ((q(19, 12) + ki) * (q(11, 12) + ki));
        let tail = pfq_at_one(
            vec![Rational::integer(ki + 1 - ni), Rational::integer(ni + ki + 3), q(11, 12), q(7, 12)],
            vec![q(23, 12) + ki, q(31, 12) + ki, Rational::integer(2)],
        )?;
        lhs -= scale * tail;
    }
    let first = pfq_at_one(
        vec![Rational::integer(ki - ni), Rational::integer(ni + ki + 2), q(11, 12), q(-5, 12)],
        den.clone(),
    )?;
    let second = pfq_at_one(
        vec![Rational::integer(ki - ni), Rational::integer(ni + ki + 2), q(-1, 12), q(-5, 12)],
        den,
    )?;
    Ok((lhs, first * q(6, 5) - second * q(1, 5)))
}

/// `T_n = V_{n-1}(x; c+1)` satisfies the `c`-recurrence
/// `T_{n+1} = (x - a_n(c)) T_n - b_n(c) T_{n-1}` for `1 <= n < n_max`.
pub fn shift_property_holds(params: &AJParams, n_max: usize) -> Result<bool> {
    let w = assoc_family(&params.shifted(), Variant::V, n_max)?;
    let t = |n: usize| if n == 0 { RatPoly::zero() } else { w[n - 1].clone() };
    for n in 1..n_max {
        let (a, b) = vrec_coefficients(params, n as u64)?;
        let rhs = &t(n).mul_x_minus(&a) - &t(n - 1).scale(&b);
        if rhs != t(n + 1) {
            return Ok(false);
        }
    }
    Ok(true)
}
