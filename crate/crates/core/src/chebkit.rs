//! Chebyshev series on `[-1, 1]`, Bernstein-ellipse geometry, and the
//! closed-form truncation bounds for analytic and finitely smooth functions.

use alloc::vec;
use alloc::vec::Vec;
use core::f64::consts::PI;

use num_traits::Float;

use crate::error::ensure;
use crate::Result;

fn check_unit(t: f64) -> Result<()> {
    ensure!(
        (-1.0..=1.0).contains(&t),
        "point {t} lies outside [-1, 1]"
    );
    Ok(())
}

/// `T_j(t)` by the three-term recurrence.
pub fn cheb_t(j: usize, t: f64) -> Result<f64> {
    check_unit(t)?;
    Ok(cheb_t_unchecked(j, t))
}

pub(crate) fn cheb_t_unchecked(j: usize, t: f64) -> f64 {
    match j {
        0 => 1.0,
        1 => t,
        _ => {
            let (mut prev, mut cur) = (1.0, t);
            for _ in 1..j {
                let next = 2.0 * t * cur - prev;
                prev = cur;
                cur = next;
            }
            cur
        }
    }
}

/// A finite Chebyshev series `Σ_{j<N} c_j T_j(t)`.
#[derive(Debug, Clone, PartialEq)]
pub struct ChebSeries {
    coeffs: Vec<f64>,
}

impl ChebSeries {
    pub fn new(coeffs: Vec<f64>) -> Result<Self> {
        ensure!(!coeffs.is_empty(), "a Chebyshev series needs at least one coefficient");
        Ok(ChebSeries { coeffs })
    }

    pub fn zeros(n: usize) -> Result<Self> {
        Self::new(vec![0.0; n])
    }

    pub fn coeffs(&self) -> &[f64] {
        &self.coeffs
    }

    /// Number of terms `N`.
    pub fn len(&self) -> usize {
        self.coeffs.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn degree(&self) -> usize {
        self.coeffs.len() - 1
    }

    /// Keeps the first `n` terms.
    pub fn truncate(&self, n: usize) -> Result<Self> {
        ensure!(n >= 1, "cannot truncate to zero terms");
        Ok(ChebSeries {
            coeffs: self.coeffs.iter().copied().take(n).collect(),
        })
    }

    /// Clenshaw evaluation.
    pub fn eval(&self, t: f64) -> Result<f64> {
        check_unit(t)?;
        Ok(self.eval_unchecked(t))
    }

    pub(crate) fn eval_unchecked(&self, t: f64) -> f64 {
        let (mut b1, mut b2) = (0.0, 0.0);
        for &c in self.coeffs[1..].iter().rev() {
            let b0 = 2.0 * t * b1 - b2 + c;
            b2 = b1;
            b1 = b0;
        }
        t * b1 - b2 + self.coeffs[0]
    }
}

/// Coefficients of the degree `n-1` interpolant through the `n` Chebyshev
/// points of the second kind, `x_k = cos(πk/(n-1))`.
pub fn cheb_coeffs(f: impl Fn(f64) -> f64, n: usize) -> Result<ChebSeries> {
    ensure!(n >= 1, "need at least one coefficient");
    if n == 1 {
        return ChebSeries::new(vec![f(0.0)]);
    }
    let m = n - 1;
    let values: Vec<f64> = (0..n).map(|k| f((PI * k as f64 / m as f64).cos())).collect();
    let mut coeffs = Vec::with_capacity(n);
    for j in 0..n {
        let mut acc = 0.0;
        for (k, v) in values.iter().enumerate() {
            let w = if k == 0 || k == m { 0.5 } else { 1.0 };
            // T_j(x_k) = cos(π j k / m); reduce the angle to keep it exact-ish
            let phase = (j * k) % (2 * m);
            acc += w * v * (PI * phase as f64 / m as f64).cos();
        }
        let mut c = 2.0 * acc / m as f64;
        if j == 0 || j == m {
            c *= 0.5;
        }
        coeffs.push(c);
    }
    ChebSeries::new(coeffs)
}

/// The `n`-term Chebyshev truncation of `f`, with coefficients taken from a
/// high-degree interpolant (aliasing below double precision for smooth `f`).
pub fn cheb_truncation(f: impl Fn(f64) -> f64, n: usize) -> Result<ChebSeries> {
    let fine = (4 * n).max(256);
    cheb_coeffs(f, fine)?.truncate(n)
}

/// Largest deviation `|f(t) - series(t)|` over `grid` equispaced points.
///
/// This is a lower bound for the true sup-norm error.
pub fn sup_error(f: impl Fn(f64) -> f64, series: &ChebSeries, grid: usize) -> Result<f64> {
    ensure!(grid >= 2, "sup_error needs at least two grid points, got {grid}");
    let step = 2.0 / (grid - 1) as f64;
    Ok((0..grid)
        .map(|i| {
            let t = if i + 1 == grid { 1.0 } else { -1.0 + step * i as f64 };
            (f(t) - series.eval_unchecked(t)).abs()
        })
        .fold(0.0, f64::max))
}

/// `ρ(ζ) = ζ + √(ζ² + 1)`: the Bernstein ellipse whose semi-minor axis is `ζ`.
pub fn bernstein_rho(zeta: f64) -> Result<f64> {
    ensure!(zeta > 0.0, "zeta must be positive, got {zeta}");
    Ok(zeta + zeta.hypot(1.0))
}

/// Inverse of [`bernstein_rho`]: the semi-minor axis `(ρ − 1/ρ)/2`.
pub fn bernstein_zeta(rho: f64) -> Result<f64> {
    ensure!(rho > 1.0, "rho must exceed 1, got {rho}");
    Ok(0.5 * (rho - rho.recip()))
}

/// Point of the Bernstein ellipse `E_ρ` at angle `theta`, as `(re, im)`.
pub fn bernstein_point(rho: f64, theta: f64) -> (f64, f64) {
    let (s, c) = theta.sin_cos();
    (0.5 * (rho + rho.recip()) * c, 0.5 * (rho - rho.recip()) * s)
}

/// A function bounded by `m` inside the Bernstein ellipse `E_ρ`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AnalyticBudget {
    m: f64,
    rho: f64,
}

impl AnalyticBudget {
    pub fn new(m: f64, rho: f64) -> Result<Self> {
        ensure!(m > 0.0 && m.is_finite(), "M must be positive and finite, got {m}");
        ensure!(rho > 1.0 && rho.is_finite(), "rho must exceed 1, got {rho}");
        Ok(AnalyticBudget { m, rho })
    }

    pub fn m(&self) -> f64 {
        self.m
    }

    pub fn rho(&self) -> f64 {
        self.rho
    }

    /// `‖y − p_{N−1}‖∞ ≤ 2Mρ^{−N+1}/(ρ − 1)`.
    pub fn truncation_error_bound(&self, n: usize) -> Result<f64> {
        ensure!(n >= 1, "need N >= 1");
        Ok(2.0 * self.m * self.rho.powi(1 - n as i32) / (self.rho - 1.0))
    }

    /// `|c_0| ≤ M`, `|c_j| ≤ 2Mρ^{−j}`.
    pub fn coefficient_bound(&self, j: usize) -> f64 {
        if j == 0 {
            self.m
        } else {
            2.0 * self.m * self.rho.powi(-(j as i32))
        }
    }
}

/// A function whose `ν`-th derivative has total variation `V`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SmoothnessBudget {
    v: f64,
    nu: u32,
}

impl SmoothnessBudget {
    /// `nu` must be at least 1: the error bound divides by `ν`.
    pub fn new(v: f64, nu: u32) -> Result<Self> {
        ensure!(v > 0.0 && v.is_finite(), "V must be positive and finite, got {v}");
        ensure!(nu >= 1, "the smoothness order must be at least 1");
        Ok(SmoothnessBudget { v, nu })
    }

    pub fn v(&self) -> f64 {
        self.v
    }

    pub fn nu(&self) -> u32 {
        self.nu
    }

    /// `‖y − p_{N−1}‖∞ ≤ 2V/(πν) · (N − 1 − ν)^{−ν}` for `N > ν + 1`.
    pub fn truncation_error_bound(&self, n: usize) -> Result<f64> {
        let nu = self.nu as usize;
        ensure!(n > nu + 1, "need N > nu + 1 (N = {n}, nu = {nu})");
        let gap = (n - 1 - nu) as f64;
        Ok(2.0 * self.v / (PI * self.nu as f64) * gap.powi(-(self.nu as i32)))
    }

    /// `|c_j| ≤ 2V/π · (j − ν)^{−(ν+1)}` for `j ≥ ν + 1`.
    pub fn coefficient_bound(&self, j: usize) -> Result<f64> {
        let nu = self.nu as usize;
        ensure!(j > nu, "need j >= nu + 1 (j = {j}, nu = {nu})");
        let gap = (j - nu) as f64;
        Ok(2.0 * self.v / PI * gap.powi(-(self.nu as i32 + 1)))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx_eq::close;

    mod approx_eq {
        pub fn close(a: f64, b: f64, tol: f64) -> bool {
            (a - b).abs() <= tol * (1.0 + b.abs())
        }
    }

    #[test]
    fn basis_values() {
        assert_eq!(cheb_t(0, 0.7).unwrap(), 1.0);
        assert_eq!(cheb_t(1, -0.3).unwrap(), -0.3);
        assert!(close(cheb_t(3, 0.5).unwrap(), -1.0, 1e-15));
        assert!(cheb_t(2, 1.5).is_err());
        for j in 0..40 {
            for &t in &[-1.0, -0.91, -0.2, 0.0, 0.33, 0.999, 1.0] {
                let direct = (j as f64 * f64::acos(t)).cos();
                assert!(close(cheb_t(j, t).unwrap(), direct, 1e-12), "j={j} t={t}");
            }
        }
    }

    #[test]
    fn clenshaw_examples() {
        let s = ChebSeries::new(vec![1.0, 0.0, 0.0]).unwrap();
        assert_eq!(s.eval(0.9).unwrap(), 1.0);
        let s = ChebSeries::new(vec![0.0, 0.0, 1.0]).unwrap();
        assert!(close(s.eval(0.5).unwrap(), -0.5, 1e-15));
        let s = ChebSeries::new(vec![0.5, 0.0, 0.5]).unwrap();
        for &t in &[-1.0, -0.4, 0.0, 0.6, 1.0] {
            assert!(close(s.eval(t).unwrap(), t * t, 1e-15));
        }
        assert!(s.eval(-1.01).is_err());
        assert!(ChebSeries::new(vec![]).is_err());
    }

    #[test]
    fn interpolation_reproduces_polynomials() {
        let c = cheb_coeffs(|t| cheb_t_unchecked(3, t), 6).unwrap();
        for (j, &v) in c.coeffs().iter().enumerate() {
            let want = if j == 3 { 1.0 } else { 0.0 };
            assert!((v - want).abs() < 1e-14, "j={j} v={v}");
        }
        let c = cheb_coeffs(|t| t * t, 4).unwrap();
        let want = [0.5, 0.0, 0.5, 0.0];
        for (v, w) in c.coeffs().iter().zip(want) {
            assert!((v - w).abs() < 1e-14);
        }
    }

    /// Gauss–Chebyshev quadrature for `(2/π)∫ f T_j / √(1−t²)`.
    fn quadrature_coeff(f: impl Fn(f64) -> f64, j: usize) -> f64 {
        let n = 4000;
        let sum: f64 = (0..n)
            .map(|k| {
                let theta = PI * (k as f64 + 0.5) / n as f64;
                f(theta.cos()) * (j as f64 * theta).cos()
            })
            .sum();
        2.0 * sum / n as f64
    }

    #[test]
    fn exp_leading_odd_coefficient() {
        let oracle = quadrature_coeff(f64::exp, 1);
        assert!((oracle - 1.130_318_207_984_970_1).abs() < 1e-13);
        let c = cheb_coeffs(f64::exp, 10).unwrap();
        assert!((c.coeffs()[1] - oracle).abs() < 1e-10);
        assert!((c.coeffs()[1] - 1.13032).abs() < 5e-6);
    }

    #[test]
    fn sup_error_examples() {
        let zero = ChebSeries::zeros(5).unwrap();
        let e = sup_error(|t| cheb_t_unchecked(5, t), &zero, 1001).unwrap();
        assert!((e - 1.0).abs() < 1e-14);
        let poly = |t: f64| 1.0 - 2.0 * t + 0.25 * t.powi(4);
        let s = cheb_coeffs(poly, 7).unwrap();
        assert!(sup_error(poly, &s, 101).unwrap() <= 1e-12);
        assert!(sup_error(poly, &s, 1).is_err());
    }

    #[test]
    fn rho_of_zeta() {
        assert!((bernstein_rho(2.0).unwrap() - 4.236_067_977_499_79).abs() < 1e-12);
        assert_eq!(bernstein_rho(1.875).unwrap(), 4.0);
        assert!((bernstein_rho(1e-8).unwrap() - 1.000_000_01).abs() < 1e-15);
        assert!(bernstein_rho(0.0).is_err());
        assert!(bernstein_rho(-1.0).is_err());
        let zeta = bernstein_zeta(3.81).unwrap();
        assert!((zeta - 1.773_766).abs() < 1e-5);
        assert!((bernstein_rho(zeta).unwrap() - 3.81).abs() < 1e-12);
    }

    #[test]
    fn analytic_bound_examples() {
        let b = AnalyticBudget::new(1.0, 2.0).unwrap();
        assert_eq!(b.truncation_error_bound(1).unwrap(), 2.0);
        assert_eq!(b.truncation_error_bound(11).unwrap(), 1.953_125e-3);
        assert_eq!(AnalyticBudget::new(3.0, 2.0).unwrap().coefficient_bound(0), 3.0);
        assert_eq!(b.coefficient_bound(5), 0.0625);
        assert!(AnalyticBudget::new(1.0, 1.0).is_err());
        assert!(AnalyticBudget::new(0.0, 2.0).is_err());
    }

    #[test]
    fn smoothness_bound_examples() {
        let b = SmoothnessBudget::new(PI, 1).unwrap();
        assert!(close(b.truncation_error_bound(3).unwrap(), 2.0, 1e-15));
        assert!(close(b.coefficient_bound(2).unwrap(), 2.0, 1e-15));
        assert!(close(b.coefficient_bound(3).unwrap(), 0.5, 1e-15));
        let b2 = SmoothnessBudget::new(PI, 2).unwrap();
        assert!(close(b2.truncation_error_bound(5).unwrap(), 0.25, 1e-15));
        assert!(b.truncation_error_bound(2).is_err());
        assert!(b.coefficient_bound(1).is_err());
        assert!(SmoothnessBudget::new(PI, 0).is_err());
    }

    /// Max of `|1/(p − z)|` over a dense parameterisation of `E_ρ`.
    fn pole_bound_on_ellipse(p: f64, rho: f64) -> f64 {
        (0..8192)
            .map(|k| {
                let (re, im) = bernstein_point(rho, 2.0 * PI * k as f64 / 8192.0);
                1.0 / (p - re).hypot(im)
            })
            .fold(0.0, f64::max)
    }

    #[test]
    fn single_pole_truncation_within_bound() {
        let f = |t: f64| 1.0 / (1.5 - t);
        let rho = 2.618;
        let m = pole_bound_on_ellipse(1.5, rho);
        let budget = AnalyticBudget::new(m, rho).unwrap();
        let interp = cheb_coeffs(f, 12).unwrap();
        let trunc = cheb_truncation(f, 12).unwrap();
        let bound = budget.truncation_error_bound(12).unwrap();
        assert!(sup_error(f, &interp, 2001).unwrap() <= bound);
        assert!(sup_error(f, &trunc, 2001).unwrap() <= bound);
        let fine = cheb_coeffs(f, 200).unwrap();
        for j in 0..=20 {
            assert!(fine.coeffs()[j].abs() <= budget.coefficient_bound(j), "j={j}");
        }
    }

    #[test]
    fn abs_value_within_smoothness_bounds() {
        // |t|: first derivative sign(t) has total variation 2
        let f = |t: f64| t.abs();
        let budget = SmoothnessBudget::new(2.0, 1).unwrap();
        let fine = cheb_coeffs(f, 4097).unwrap();
        for j in 2..=40 {
            assert!(fine.coeffs()[j].abs() <= budget.coefficient_bound(j).unwrap(), "j={j}");
        }
        for n in 3..40 {
            let trunc = fine.truncate(n).unwrap();
            let err = sup_error(f, &trunc, 4001).unwrap();
            assert!(err <= budget.truncation_error_bound(n).unwrap(), "n={n} err={err}");
        }
    }

    proptest::proptest! {
        #[test]
        fn clenshaw_matches_cosine_sum(
            coeffs in proptest::collection::vec(-1.0f64..1.0, 1..30),
            t in -1.0f64..=1.0,
        ) {
            let s = ChebSeries::new(coeffs.clone()).unwrap();
            let direct: f64 = coeffs.iter().enumerate()
                .map(|(j, c)| c * (j as f64 * t.acos()).cos()).sum();
            let scale: f64 = coeffs.iter().map(|c| c.abs()).sum();
            proptest::prop_assert!((s.eval(t).unwrap() - direct).abs() <= 1e-12 * (1.0 + scale));
        }

        #[test]
        fn interpolant_reproduces_random_polynomials(
            coeffs in proptest::collection::vec(-2.0f64..2.0, 1..15),
            pts in proptest::collection::vec(-1.0f64..=1.0, 101),
        ) {
            let poly = |t: f64| coeffs.iter().rev().fold(0.0, |acc, c| acc * t + c);
            let s = cheb_coeffs(poly, coeffs.len() + 2).unwrap();
            for &t in &pts {
                proptest::prop_assert!((s.eval(t).unwrap() - poly(t)).abs() < 1e-10);
            }
        }

        #[test]
        fn semi_minor_axis_identity(zeta in 1e-6f64..50.0, bump in 1e-6f64..1.0) {
            let rho = bernstein_rho(zeta).unwrap();
            proptest::prop_assert!(((rho - rho.recip()) / 2.0 - zeta).abs() <= 1e-12 * (1.0 + zeta));
            proptest::prop_assert!(bernstein_rho(zeta + bump).unwrap() > rho);
        }
    }
}
