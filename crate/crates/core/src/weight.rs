//! The orthogonality weight of the Atkin polynomials on `[0, 1728]`, built
//! from `F = 2F1(1/12, 1/12; 2/3; J)` and `F* = 2F1(5/12, 5/12; 4/3; J)` with
//! `J = j / 1728`, plus the quadrature-based Gram and moment checks.
//!
//! The angle map uses the inverse branch on which `phi` runs from `pi/3` at
//! `J = 0` to `pi/2` at `J = 1`; the other branch of the inverse is not used.

use std::f64::consts::{FRAC_PI_2, FRAC_PI_3, PI};

use serde::{Deserialize, Serialize};

use crate::atkin::{recurrence_coefficients, FloatRecurrence, Scale, J_MAX};
use crate::error::{Error, Result};
use crate::gamma::gamma_real;
use crate::hypergeom::{f21_derivative, f21_with_complement, DEFAULT_TOL};
use crate::quadrature::{integrate_vec, Abscissa, QuadOptions, QuadResult};
use crate::Execution;

const JM: f64 = J_MAX as f64;
const SPLIT: f64 = JM / 2.0;
const SQRT3: f64 = 1.732_050_807_568_877_2;

/// `Gamma(2/3) Gamma(5/12) Gamma(11/12) / (Gamma(4/3) Gamma(1/12) Gamma(7/12))`
/// and `(2 - sqrt 3) Gamma(2/3) Gamma(11/12)^2 / (Gamma(4/3) Gamma(7/12)^2)`.
pub fn lambda_star_forms() -> Result<(f64, f64)> {
    let g = |x: f64| gamma_real(x);
    let first = g(2.0 / 3.0)? * g(5.0 / 12.0)? * g(11.0 / 12.0)?
        / (g(4.0 / 3.0)? * g(1.0 / 12.0)? * g(7.0 / 12.0)?);
    let g11 = g(11.0 / 12.0)?;
    let g7 = g(7.0 / 12.0)?;
    let second = (2.0 - SQRT3) * g(2.0 / 3.0)? * g11 * g11 / (g(4.0 / 3.0)? * g7 * g7);
    Ok((first, second))
}

/// The constant `lambda` pairing `F` with `J^(1/3) F*`; the mean of the two
/// gamma-product forms, which must agree to `1e-12` relative.
pub fn lambda_star() -> Result<f64> {
    let (a, b) = lambda_star_forms()?;
    if (a - b).abs() > 1e-12 * a.abs() {
        return Err(Error::InternalInconsistency(format!("lambda forms disagree: {a} vs {b}")));
    }
    Ok(0.5 * (a + b))
}

/// Immutable evaluation context: `lambda` plus quadrature settings.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct WeightContext {
    pub lambda_star: f64,
    pub quad_tolerance: f64,
    pub quad_level_cap: usize,
}

impl WeightContext {
    pub fn new(quad_tolerance: f64, quad_level_cap: usize) -> Result<Self> {
        let lambda_star = lambda_star()?;
        if !(lambda_star > 0.0 && lambda_star < 1.0) {
            return Err(Error::InternalInconsistency(format!("lambda = {lambda_star} outside (0, 1)")));
        }
        Ok(WeightContext { lambda_star, quad_tolerance, quad_level_cap })
    }

    /// Tolerance `1e-12`, level cap 12.
    pub fn standard() -> Result<Self> {
        Self::new(1e-12, 12)
    }

    fn quad_options(&self, execution: Execution) -> QuadOptions {
        QuadOptions { tol: self.quad_tolerance, level_cap: self.quad_level_cap, execution }
    }
}

fn check_closed(j: f64) -> Result<()> {
    if (0.0..=1.0).contains(&j) {
        Ok(())
    } else {
        Err(Error::DomainError(format!("J = {j} outside [0, 1]")))
    }
}

fn check_open(j: f64, jc: f64) -> Result<()> {
    if j > 0.0 && jc > 0.0 {
        Ok(())
    } else {
        Err(Error::DomainError(format!("J = {j} outside (0, 1): endpoint singularity")))
    }
}

/// `(F(J), F*(J))` with `1 - J` supplied separately.
pub fn f_and_fstar_with_complement(j: f64, jc: f64) -> Result<(f64, f64)> {
    let f = f21_with_complement(1.0 / 12.0, 1.0 / 12.0, 2.0 / 3.0, j, jc, DEFAULT_TOL)?.value;
    let fs = f21_with_complement(5.0 / 12.0, 5.0 / 12.0, 4.0 / 3.0, j, jc, DEFAULT_TOL)?.value;
    Ok((f, fs))
}

pub fn f_and_fstar(j: f64) -> Result<(f64, f64)> {
    check_closed(j)?;
    f_and_fstar_with_complement(j, 1.0 - j)
}

/// Real and imaginary parts of `N = F - lambda e^(-i pi/3) J^(1/3) F*`.
fn n_parts(lambda: f64, j: f64, jc: f64) -> Result<(f64, f64)> {
    let (f, fs) = f_and_fstar_with_complement(j, jc)?;
    let r = j.cbrt();
    Ok((f - 0.5 * lambda * r * fs, 0.5 * SQRT3 * lambda * r * fs))
}

impl WeightContext {
    /// `|F - lambda e^(-i pi/3) J^(1/3) F*|^2`.
    pub fn n_abs2(&self, j: f64) -> Result<f64> {
        check_closed(j)?;
        let (re, im) = n_parts(self.lambda_star, j, 1.0 - j)?;
        Ok(re * re + im * im)
    }

    /// `phi(J) = pi/3 + 2 arg N(J)`, rising from `pi/3` to `pi/2` on `[0, 1]`.
    pub fn phi(&self, j: f64) -> Result<f64> {
        check_closed(j)?;
        let (re, im) = n_parts(self.lambda_star, j, 1.0 - j)?;
        Ok(FRAC_PI_3 + 2.0 * im.atan2(re))
    }

    /// `phi'(J) = (lambda / sqrt 3) J^(-2/3) (1 - J)^(-1/2) / |N|^2` on `(0, 1)`.
    pub fn phi_prime(&self, j: f64) -> Result<f64> {
        check_closed(j)?;
        self.phi_prime_with_complement(j, 1.0 - j)
    }

    pub fn phi_prime_with_complement(&self, j: f64, jc: f64) -> Result<f64> {
        check_open(j, jc)?;
        let (re, im) = n_parts(self.lambda_star, j, jc)?;
        Ok(self.lambda_star / SQRT3 * j.powf(-2.0 / 3.0) / jc.sqrt() / (re * re + im * im))
    }

    /// `w(j) = (1728 lambda / pi) j^(-2/3) (1728 - j)^(-1/2) / |12 F - lambda e^(-i pi/3) j^(1/3) F*|^2`
    /// with `F`, `F*` at `j / 1728`; equal to `(6 / (1728 pi)) phi'(j / 1728)`
    /// and of total mass 1 on `[0, 1728]`.
    pub fn weight_w(&self, j: f64) -> Result<f64> {
        if !(0.0..=JM).contains(&j) {
            return Err(Error::DomainError(format!("j = {j} outside [0, 1728]")));
        }
        self.weight_w_with_complement(j, JM - j)
    }

    /// As [`weight_w`](Self::weight_w) with `1728 - j` supplied separately.
    pub fn weight_w_with_complement(&self, j: f64, jc: f64) -> Result<f64> {
        if !(j > 0.0 && jc > 0.0) {
            return Err(Error::DomainError(format!("j = {j} outside (0, 1728): endpoint singularity")));
        }
        let (f, fs) = f_and_fstar_with_complement(j / JM, jc / JM)?;
        let lam = self.lambda_star;
        let r = j.cbrt();
        let re = 12.0 * f - 0.5 * lam * r * fs;
        let im = 0.5 * SQRT3 * lam * r * fs;
        Ok(JM * lam / PI * j.powf(-2.0 / 3.0) / jc.sqrt() / (re * re + im * im))
    }

    /// `W(J) = (lambda / sqrt 3) J^(-2/3) (F F* + 3 J (F F*' - F' F*))`, the
    /// Wronskian of `F` and `lambda J^(1/3) F*` up to the factor `i`.
    pub fn wronskian(&self, j: f64) -> Result<f64> {
        check_closed(j)?;
        check_open(j, 1.0 - j)?;
        let jc = 1.0 - j;
        let (f, fs) = f_and_fstar_with_complement(j, jc)?;
        let df = f21_derivative(1.0 / 12.0, 1.0 / 12.0, 2.0 / 3.0, j, jc, DEFAULT_TOL)?.value;
        let dfs = f21_derivative(5.0 / 12.0, 5.0 / 12.0, 4.0 / 3.0, j, jc, DEFAULT_TOL)?.value;
        Ok(self.lambda_star / SQRT3 * j.powf(-2.0 / 3.0) * (f * fs + 3.0 * j * (f * dfs - df * fs)))
    }

    /// `|W(J) - (lambda / sqrt 3) J^(-2/3) (1 - J)^(-1/2)|`.
    pub fn wronskian_residual(&self, j: f64) -> Result<f64> {
        let w = self.wronskian(j)?;
        let closed = self.lambda_star / SQRT3 * j.powf(-2.0 / 3.0) / (1.0 - j).sqrt();
        Ok((w - closed).abs())
    }

    /// Residual of `z (1 - z) W' = ((a + b + 1) z - c) W` with
    /// `(a, b, c) = (1/12, 1/12, 2/3)`, `W'` by central differences of step `h`.
    pub fn wronskian_ode_residual(&self, j: f64, h: f64) -> Result<f64> {
        let w = self.wronskian(j)?;
        let dw = (self.wronskian(j + h)? - self.wronskian(j - h)?) / (2.0 * h);
        Ok((j * (1.0 - j) * dw - ((7.0 / 6.0) * j - 2.0 / 3.0) * w).abs())
    }

    /// `int_0^1728 f(j, 1728 - j) dj`, split at 864 so both endpoint
    /// distances stay exact.
    pub fn quad_integrate_vec<F>(&self, dim: usize, f: F, execution: Execution) -> Result<QuadResult>
    where
        F: Fn(f64, f64) -> Vec<f64> + Sync + Send,
    {
        let opts = self.quad_options(execution);
        let lo = integrate_vec(0.0, SPLIT, dim, |p: &Abscissa| f(p.dist_lo, JM - p.x), &opts)?;
        let hi = integrate_vec(SPLIT, JM, dim, |p: &Abscissa| f(p.x, p.dist_hi), &opts)?;
        Ok(QuadResult {
            values: lo.values.iter().zip(&hi.values).map(|(a, b)| a + b).collect(),
            l1: lo.l1.iter().zip(&hi.l1).map(|(a, b)| a + b).collect(),
            levels: lo.levels.max(hi.levels),
            last_change: lo.last_change.max(hi.last_change),
            evaluations: lo.evaluations + hi.evaluations,
        })
    }

    pub fn quad_integrate<F>(&self, f: F, execution: Execution) -> Result<f64>
    where
        F: Fn(f64, f64) -> f64 + Sync + Send,
    {
        Ok(self.quad_integrate_vec(1, |j, jc| vec![f(j, jc)], execution)?.values[0])
    }

    /// `int j^k w(j) dj` for `k = 0..=k_max`.
    pub fn moments(&self, k_max: usize, execution: Execution) -> Result<Vec<f64>> {
        let r = self.quad_integrate_vec(
            k_max + 1,
            |j, jc| {
                let w = self.weight_w_with_complement(j, jc).unwrap_or(f64::NAN);
                (0..=k_max).map(|k| w * j.powi(k as i32)).collect()
            },
            execution,
        )?;
        Ok(r.values)
    }

    /// `int A_m A_n w dj` for all `0 <= m, n <= n_max`, in one vector
    /// quadrature over the upper triangle.
    pub fn gram_matrix(&self, n_max: usize, execution: Execution) -> Result<GramMatrix> {
        let rec = FloatRecurrence::new(Scale::Original, n_max + 1);
        let dim = (n_max + 1) * (n_max + 2) / 2;
        let r = self.quad_integrate_vec(
            dim,
            |j, jc| {
                let w = self.weight_w_with_complement(j, jc).unwrap_or(f64::NAN);
                let mut a = vec![0.0; n_max + 1];
                rec.eval_into(j, &mut a);
                let mut out = Vec::with_capacity(dim);
                for m in 0..=n_max {
                    for n in m..=n_max {
                        out.push(a[m] * a[n] * w);
                    }
                }
                out
            },
            execution,
        )?;
        let mut entries = vec![vec![0.0; n_max + 1]; n_max + 1];
        let pairs = (0..=n_max).flat_map(|m| (m..=n_max).map(move |n| (m, n)));
        for ((m, n), &v) in pairs.zip(&r.values) {
            entries[m][n] = v;
            entries[n][m] = v;
        }
        Ok(GramMatrix { n_max, entries, levels: r.levels, evaluations: r.evaluations })
    }

    /// A single Gram entry; `m, n <= 8`.
    pub fn gram(&self, m: usize, n: usize, execution: Execution) -> Result<f64> {
        if m.max(n) > GRAM_MAX_DEGREE {
            return Err(Error::DomainError(format!("gram supports degrees <= {GRAM_MAX_DEGREE}")));
        }
        Ok(self.gram_matrix(m.max(n), execution)?.entries[m][n])
    }

    /// `(j, w(j))` at `j = 1728 k / (points + 1)`, `k = 1..=points`.
    pub fn grid(&self, points: usize) -> Result<Vec<(f64, f64)>> {
        (1..=points)
            .map(|k| {
                let j = JM * k as f64 / (points + 1) as f64;
                Ok((j, self.weight_w(j)?))
            })
            .collect()
    }
}

pub const GRAM_MAX_DEGREE: usize = 8;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GramMatrix {
    pub n_max: usize,
    pub entries: Vec<Vec<f64>>,
    pub levels: usize,
    pub evaluations: usize,
}

impl GramMatrix {
    /// Largest `|G_mn| / sqrt(G_mm G_nn)` over `m < n`.
    pub fn max_normalized_off_diagonal(&self) -> f64 {
        let g = &self.entries;
        let mut worst = 0.0f64;
        for m in 0..=self.n_max {
            for n in m + 1..=self.n_max {
                worst = worst.max(g[m][n].abs() / (g[m][m] * g[n][n]).sqrt());
            }
        }
        worst
    }

    /// `(n, G_nn / G_{n-1,n-1}, b_n)` for `n = 1..=n_max`.
    pub fn diagonal_ratios(&self) -> Vec<(usize, f64, f64)> {
        (1..=self.n_max)
            .map(|n| {
                let ratio = self.entries[n][n] / self.entries[n - 1][n - 1];
                let (_, b) = recurrence_coefficients(Scale::Original, n as u64);
                (n, ratio, b.to_f64())
            })
            .collect()
    }
}

/// `pi/3` and `pi/2`, the end values of `phi`.
pub const PHI_RANGE: (f64, f64) = (FRAC_PI_3, FRAC_PI_2);

#[cfg(test)]
mod tests {
    use super::*;

    fn ctx() -> WeightContext {
        WeightContext::standard().unwrap()
    }

    #[test]
    fn lambda_value() {
        let (a, b) = lambda_star_forms().unwrap();
        assert!((a - b).abs() < 1e-12 * a);
        assert!((ctx().lambda_star - 0.193_719_119_392_442_7).abs() < 1e-13);
    }

    #[test]
    fn f_values() {
        assert_eq!(f_and_fstar(0.0).unwrap(), (1.0, 1.0));
        // Gauss sums at J = 1
        let (f1, fs1) = f_and_fstar(1.0).unwrap();
        let g = |x: f64| gamma_real(x).unwrap();
        assert!((f1 - g(2.0 / 3.0) * g(0.5) / (g(7.0 / 12.0) * g(7.0 / 12.0))).abs() < 1e-13);
        assert!((fs1 - g(4.0 / 3.0) * g(0.5) / (g(11.0 / 12.0) * g(11.0 / 12.0))).abs() < 1e-13);
        let mut prev = (0.0, 0.0);
        for k in 0..=10 {
            let v = f_and_fstar(k as f64 / 10.0).unwrap();
            assert!(v.0 > prev.0 && v.1 > prev.1);
            prev = v;
        }
        assert!(f_and_fstar(1.1).is_err());
    }

    #[test]
    fn phi_range_and_monotone() {
        let c = ctx();
        assert!((c.phi(0.0).unwrap() - FRAC_PI_3).abs() < 1e-9);
        assert!((c.phi(1.0).unwrap() - FRAC_PI_2).abs() < 1e-9);
        let mut prev = f64::NEG_INFINITY;
        for k in 0..=100 {
            let p = c.phi(k as f64 / 100.0).unwrap();
            assert!(p > prev);
            prev = p;
        }
    }

    #[test]
    fn phi_prime_checks() {
        let c = ctx();
        for k in 1..10 {
            assert!(c.phi_prime(k as f64 / 10.0).unwrap() > 0.0);
        }
        let h = 1e-5;
        let fd = (c.phi(0.5 + h).unwrap() - c.phi(0.5 - h).unwrap()) / (2.0 * h);
        assert!((fd - c.phi_prime(0.5).unwrap()).abs() <= 1e-6);
        for k in 1..10 {
            let j = k as f64 / 10.0;
            let scaled = j.powf(2.0 / 3.0) * (1.0 - j).sqrt() * c.phi_prime(j).unwrap() * c.n_abs2(j).unwrap();
            assert!((scaled - c.lambda_star / SQRT3).abs() < 1e-14);
        }
        assert!(c.phi_prime(0.0).is_err() && c.phi_prime(1.0).is_err());
    }

    #[test]
    fn weight_consistency() {
        let c = ctx();
        let lhs = JM * c.weight_w(JM * 0.5).unwrap();
        let rhs = 6.0 / PI * c.phi_prime(0.5).unwrap();
        assert!((lhs - rhs).abs() <= 1e-10 * rhs);
        assert!(c.grid(99).unwrap().iter().all(|&(_, w)| w > 0.0));
        assert!(c.weight_w(0.0).is_err() && c.weight_w(JM).is_err());
    }

    #[test]
    fn wronskian() {
        let c = ctx();
        for k in 1..10 {
            assert!(c.wronskian_residual(k as f64 / 10.0).unwrap() <= 1e-9);
        }
        assert!(c.wronskian_ode_residual(0.3, 1e-5).unwrap() <= 1e-6);
    }

    #[test]
    fn mass_and_first_moment() {
        let c = ctx();
        let m = c.moments(2, Execution::default()).unwrap();
        assert!((m[0] - 1.0).abs() <= 1e-8, "{m:?}");
        assert!((m[1] - 720.0).abs() <= 1e-5 * 720.0);
    }

    #[test]
    fn gram_small() {
        let c = ctx();
        let g = c.gram_matrix(3, Execution::default()).unwrap();
        assert!((g.entries[1][1] - 393_120.0).abs() <= 1e-6 * 393_120.0);
        assert!(g.max_normalized_off_diagonal() <= 1e-7);
        assert!(c.gram(9, 0, Execution::default()).is_err());
    }
}
