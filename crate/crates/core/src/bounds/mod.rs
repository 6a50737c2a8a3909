//! Closed-form hyperellipsoid width bounds, width reports and the
//! two-regime split of Taylor spectra.

mod kink;
mod report;

use num_traits::Float;

pub use kink::{kink_split, KinkSplit};
pub use report::{format_f64, WidthRecord, WidthReport};

use crate::chebkit::AnalyticBudget;
use crate::design::triangular;
use crate::error::ensure;
use crate::Result;

/// Derivative budget `Σ_k (R^k a_k)² < C² N` on `[-1, 1]`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TaylorBudget {
    c: f64,
    r: f64,
    n: usize,
}

impl TaylorBudget {
    pub fn new(c: f64, r: f64, n: usize) -> Result<Self> {
        ensure!(c > 0.0 && c.is_finite(), "C must be positive and finite, got {c}");
        ensure!(r > 1.0 && r.is_finite(), "R must exceed 1, got {r}");
        ensure!(n >= 1, "N must be at least 1");
        Ok(TaylorBudget { c, r, n })
    }

    pub fn c(&self) -> f64 {
        self.c
    }

    pub fn r(&self) -> f64 {
        self.r
    }

    pub fn n(&self) -> usize {
        self.n
    }

    /// Radius `C√N` of the ball holding the scaled Taylor coefficients.
    pub fn radius(&self) -> f64 {
        self.c * (self.n as f64).sqrt()
    }

    /// Radius `C√n`, `n = N(N+1)/2`, for the bivariate budget.
    pub fn radius_2d(&self) -> f64 {
        self.c * (triangular(self.n) as f64).sqrt()
    }

    /// `‖y − p_{N−1}‖∞ ≤ C(NR − N + R)/(1−R)² · R^{−N+1}`.
    pub fn error_bound(&self) -> f64 {
        let (n, r) = (self.n as f64, self.r);
        self.c * (n * r - n + r) / (1.0 - r).powi(2) * r.powi(1 - self.n as i32)
    }

    /// `ℓ_j ≤ 2CN/√(R²−1) · R^{−j+2}` for `j ≥ 2`.
    pub fn width_bound(&self, j: usize) -> Result<f64> {
        ensure!(j >= 2, "the width bound needs j >= 2, got {j}");
        let r = self.r;
        Ok(2.0 * self.c * self.n as f64 / (r * r - 1.0).sqrt() * r.powi(2 - j as i32))
    }

    /// Truncation error of the total-degree `N−1` bivariate Taylor polynomial,
    /// assuming the budget holds at every total degree `d`: then
    /// `|ã_jk| ≤ C√((d+1)(d+2)/2)`, and with `d+1` terms per degree
    /// the tail is at most `C/√2 · Σ_{d≥N} (d+1)(d+2) R^{−d}`.
    pub fn error_bound_2d(&self) -> f64 {
        let x = self.r.recip();
        let mut sum = 0.0;
        let mut d = self.n;
        loop {
            let term = ((d + 1) * (d + 2)) as f64 * x.powi(d as i32);
            sum += term;
            if term <= 1e-18 * sum || d > 100_000 {
                break;
            }
            d += 1;
        }
        self.c / 2f64.sqrt() * sum
    }
}

/// `ρ_max = R + √(R² + 1)`.
pub fn rho_max(r: f64) -> Result<f64> {
    ensure!(r > 1.0, "R must exceed 1, got {r}");
    Ok(r + r.hypot(1.0))
}

/// `σ_j(JD) ≤ √N ρ^{−j+2}/√(ρ²−1)` for `j ≥ 2`.
pub fn cheb_sv_bound(n: usize, rho: f64, j: usize) -> Result<f64> {
    ensure!(rho > 1.0, "rho must exceed 1, got {rho}");
    ensure!(j >= 2, "the singular value bound needs j >= 2, got {j}");
    Ok((n as f64).sqrt() * rho.powi(2 - j as i32) / (rho * rho - 1.0).sqrt())
}

/// Width bound of `H_Y` for the Chebyshev truncation:
/// `2M√(4N²−3N) ρ^{−j+2}/√(ρ²−1) + 4Mρ^{−N+1}/(ρ−1)`, `2 ≤ j ≤ N`.
pub fn hy_cheb_bound(budget: &AnalyticBudget, n: usize, j: usize) -> Result<f64> {
    ensure!((2..=n).contains(&j), "j must lie in [2, {n}], got {j}");
    let (m, rho) = (budget.m(), budget.rho());
    let nf = n as f64;
    let first = 2.0 * m * (4.0 * nf * nf - 3.0 * nf).sqrt() * rho.powi(2 - j as i32)
        / (rho * rho - 1.0).sqrt();
    Ok(first + 2.0 * budget.truncation_error_bound(n)?)
}

/// Radius `M√(4N−3)` of the ball holding the scaled Chebyshev coefficients
/// (`|c̃_0| ≤ M`, `|c̃_j| ≤ 2M`).
pub fn cheb_radius(m: f64, n: usize) -> f64 {
    m * ((4 * n) as f64 - 3.0).sqrt()
}

fn check_rho(rho: f64) -> Result<()> {
    ensure!(rho > 1.0 && rho.is_finite(), "rho must exceed 1, got {rho}");
    Ok(())
}

/// `⌊√(8(j−1)+1)/2 − 1/2⌋`: the total-degree block holding 1-based column `j`.
pub fn block_exponent(j: usize) -> usize {
    // exact integer version of the floor expression
    let k = 8 * (j - 1) + 1;
    let mut root = (k as f64).sqrt() as usize;
    while root * root > k {
        root -= 1;
    }
    while (root + 1) * (root + 1) <= k {
        root += 1;
    }
    (root - 1) / 2
}

/// `C₂ = (1 + ρ^{−2} + ρ^{−4})/(1 − ρ^{−2})³`.
pub fn c2(rho: f64) -> f64 {
    let q = rho.powi(-2);
    (1.0 + q + q * q) / (1.0 - q).powi(3)
}

/// `σ_j(X) ≤ (3√C₂/2) n ρ^{−⌊√(8(j−1)+1)/2 − 1/2⌋}` for the 2D Chebyshev
/// design, `n = N(N+1)/2`.
pub fn bound_2d_sv(n_order: usize, rho: f64, j: usize) -> Result<f64> {
    check_rho(rho)?;
    ensure!(j >= 2, "the 2D bound needs j >= 2, got {j}");
    let n = triangular(n_order) as f64;
    Ok(1.5 * c2(rho).sqrt() * n * rho.powi(-(block_exponent(j) as i32)))
}

/// `‖y − p_{N−1}‖∞ ≤ 4MN C₁ ρ^{−N+1}` with `C₁ = (2ρ−1)/(1−ρ)²`.
pub fn bound_2d_error(budget: &AnalyticBudget, n: usize) -> Result<f64> {
    ensure!(n >= 1, "N must be at least 1");
    let (m, rho) = (budget.m(), budget.rho());
    let c1 = (2.0 * rho - 1.0) / (1.0 - rho).powi(2);
    Ok(4.0 * m * n as f64 * c1 * rho.powi(1 - n as i32))
}

/// `|c_jk| ≤ 4M ρ^{−(j+k)}`.
pub fn coeff_bound_2d(budget: &AnalyticBudget, j: usize, k: usize) -> f64 {
    4.0 * budget.m() * budget.rho().powi(-((j + k) as i32))
}

/// Radius `4M√n` of the scaled bivariate Chebyshev coefficient ball.
pub fn radius_2d(m: f64, n_order: usize) -> f64 {
    4.0 * m * (triangular(n_order) as f64).sqrt()
}

/// The alternative 2D width prefactor `2√N · (3√C₂/2) n ρ^{−⌊…⌋}`.
pub fn width_2d_alt(n_order: usize, rho: f64, j: usize) -> Result<f64> {
    Ok(2.0 * (n_order as f64).sqrt() * bound_2d_sv(n_order, rho, j)?)
}
