use alloc::vec::Vec;

use num_traits::Float;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::sampler::SampleCloud;
use crate::bounds::WidthReport;
use crate::design::DesignMatrix;
use crate::error::ensure;
use crate::matrix::Matrix;
use crate::real::Real;
use crate::spectral::left_singular_basis;
use crate::{Error, Result};

/// Rotated coordinates `Z = Uᵀ Y` of each sample, and the part of `Y`
/// outside the span of `U`.
#[derive(Debug, Clone, PartialEq)]
pub struct Projection {
    pub coords: Vec<Vec<f64>>,
    /// `‖Y − U Z‖₂` per sample.
    pub residuals: Vec<f64>,
    /// Length of the prediction vectors.
    pub dim: usize,
}

impl Projection {
    /// `sample_id,z_1..z_k`.
    pub fn to_csv(&self) -> alloc::string::String {
        use core::fmt::Write;
        let mut out = alloc::string::String::from("sample_id");
        let k = self.coords.first().map_or(0, Vec::len);
        for j in 1..=k {
            let _ = write!(out, ",z_{j}");
        }
        out.push('\n');
        for (id, z) in self.coords.iter().enumerate() {
            let _ = write!(out, "{id}");
            for v in z {
                let _ = write!(out, ",{v:.16e}");
            }
            out.push('\n');
        }
        out
    }
}

/// Projects prediction vectors onto the columns of `u` (`rows × k`).
pub fn project_with_basis(predictions: &[Vec<f64>], u: &Matrix<f64>) -> Result<Projection> {
    let rows = u.rows();
    let mut coords = Vec::with_capacity(predictions.len());
    let mut residuals = Vec::with_capacity(predictions.len());
    for y in predictions {
        if y.len() != rows {
            return Err(Error::Dimension {
                expected: rows,
                found: y.len(),
            });
        }
        let z = u.transpose_mul_vec(y)?;
        let mut res = y.clone();
        for (j, zj) in z.iter().enumerate() {
            for (i, r) in res.iter_mut().enumerate() {
                *r -= u.get(i, j) * zj;
            }
        }
        residuals.push(res.iter().map(|r| r * r).sum::<f64>().sqrt());
        coords.push(z);
    }
    Ok(Projection {
        coords,
        residuals,
        dim: rows,
    })
}

/// Projection onto the left singular vectors of `x`.
pub fn project_cloud(cloud: &SampleCloud, x: &DesignMatrix, digits: u32) -> Result<Projection> {
    if x.rows() != cloud.nodes.len() {
        return Err(Error::Dimension {
            expected: cloud.nodes.len(),
            found: x.rows(),
        });
    }
    let (_, u) = left_singular_basis(x, digits)?;
    let preds: Vec<Vec<f64>> = cloud.samples.iter().map(|s| s.predictions.clone()).collect();
    project_with_basis(&preds, &u.map(Real::to_f64))
}

/// `max_s Z_j − min_s Z_j` per axis.
pub fn empirical_widths(proj: &Projection) -> Result<Vec<f64>> {
    ensure!(proj.coords.len() >= 2, "widths need at least two samples");
    let k = proj.coords[0].len();
    Ok((0..k)
        .map(|j| {
            let (lo, hi) = proj
                .coords
                .iter()
                .fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), z| (lo.min(z[j]), hi.max(z[j])));
            hi - lo
        })
        .collect())
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EnclosureRecord {
    pub passed: bool,
    pub violations: usize,
    /// Largest `|Z_j| − (ell_P(j)/2 + err)`; positive means outside.
    pub worst_margin: f64,
    pub worst_sample: usize,
    /// 1-based.
    pub worst_axis: usize,
    /// Largest residual outside the span of the basis.
    pub max_residual: f64,
    /// `√rows · err`, the allowance for that residual.
    pub residual_limit: f64,
}

/// Checks `|Z_j| ≤ ell_P(j)/2 + err` for every sample and axis, and the
/// out-of-span residual against `√rows·err`.
pub fn enclosure_check(proj: &Projection, report: &WidthReport) -> EnclosureRecord {
    let ell = report.ell_p_f64();
    let err = report.err();
    let mut rec = EnclosureRecord {
        passed: true,
        violations: 0,
        worst_margin: f64::NEG_INFINITY,
        worst_sample: 0,
        worst_axis: 1,
        max_residual: 0.0,
        residual_limit: 0.0,
    };
    for (s, z) in proj.coords.iter().enumerate() {
        for (j, (zj, lj)) in z.iter().zip(&ell).enumerate() {
            let margin = zj.abs() - (lj / 2.0 + err);
            if margin > 0.0 {
                rec.violations += 1;
            }
            if margin > rec.worst_margin {
                rec.worst_margin = margin;
                rec.worst_sample = s;
                rec.worst_axis = j + 1;
            }
        }
    }
    rec.residual_limit = (proj.dim as f64).sqrt() * err;
    for r in &proj.residuals {
        rec.max_residual = rec.max_residual.max(*r);
        if *r > rec.residual_limit + 1e-12 {
            rec.violations += 1;
        }
    }
    rec.passed = rec.violations == 0;
    rec
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EllipsoidRecord {
    pub passed: bool,
    /// Largest `Σ_j (Z_j/(rσ_j))²` over samples.
    pub max_value: f64,
}

/// Membership `Σ_j (Z_j/(rσ_j))² ≤ 1 + tol` for clouds known to be exact
/// images `X c` with `‖c‖ ≤ r`.
pub fn ellipsoid_check(proj: &Projection, sigma: &[f64], r: f64, tol: f64) -> EllipsoidRecord {
    let mut max_value = 0.0f64;
    for z in &proj.coords {
        let v: f64 = z.iter().zip(sigma).map(|(zj, s)| (zj / (r * s)).powi(2)).sum();
        max_value = max_value.max(v);
    }
    EllipsoidRecord {
        passed: max_value <= 1.0 + tol,
        max_value,
    }
}

/// `count` prediction vectors `X c` with `‖c‖₂ ≤ r`: random directions,
/// radii spread over `[0, r]` with every fourth vector on the sphere.
pub fn polynomial_cloud(x: &DesignMatrix, r: f64, count: usize, seed: u64) -> Vec<Vec<f64>> {
    let a = x.entries();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..count)
        .map(|k| {
            let mut c: Vec<f64> = (0..a.cols()).map(|_| rng.random::<f64>() * 2.0 - 1.0).collect();
            let norm = c.iter().map(|v| v * v).sum::<f64>().sqrt().max(f64::MIN_POSITIVE);
            let radius = if k % 4 == 0 { r } else { r * rng.random::<f64>() };
            for v in &mut c {
                *v *= radius / norm;
            }
            (0..a.rows())
                .map(|i| a.row(i).iter().zip(&c).map(|(p, q)| p * q).sum())
                .collect()
        })
        .collect()
}
