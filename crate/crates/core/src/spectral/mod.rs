//! Singular values of design matrices in extended precision, the graded
//! eigenvalue bound, and decay-rate fits.

mod eigen;
mod fit;
mod jacobi;
mod schur;

use alloc::vec::Vec;

pub use eigen::symmetric_eigenvalues;
pub use fit::{line_fit, slope_fit, DecayMode, LineFit};
pub use jacobi::{svd, JacobiOptions, Svd};
pub use schur::{graded, graded_eigen_bound, schur_lowrank};

use crate::design::{DesignKind, DesignMatrix};
use crate::error::ensure;
use crate::matrix::Matrix;
use crate::real::{ExtReal, Precision, Real};
use crate::Result;

/// Default working precision in decimal digits.
pub const DEFAULT_DIGITS: u32 = 60;

/// Descending singular values with the precision they were computed at.
#[derive(Debug, Clone, PartialEq)]
pub struct SingularSpectrum {
    values: Vec<ExtReal>,
    digits: u32,
    source: Option<DesignKind>,
}

impl SingularSpectrum {
    pub fn new(values: Vec<ExtReal>, digits: u32, source: Option<DesignKind>) -> Self {
        SingularSpectrum {
            values,
            digits,
            source,
        }
    }

    pub fn values(&self) -> &[ExtReal] {
        &self.values
    }

    pub fn to_f64(&self) -> Vec<f64> {
        self.values.iter().map(Real::to_f64).collect()
    }

    pub fn log10(&self) -> Vec<f64> {
        self.values.iter().map(Real::log10_abs).collect()
    }

    pub fn digits(&self) -> u32 {
        self.digits
    }

    pub fn source(&self) -> Option<DesignKind> {
        self.source
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    /// `j,sigma` lines, σ at full precision.
    pub fn to_csv(&self) -> alloc::string::String {
        let mut out = alloc::string::String::from("j,sigma\n");
        for (j, v) in self.values.iter().enumerate() {
            out.push_str(&alloc::format!("{},{}\n", j + 1, v.to_scientific(self.digits as usize)));
        }
        out
    }
}

fn check_digits(digits: u32) -> Result<()> {
    ensure!(digits >= 15, "precision must be at least 15 digits, got {digits}");
    Ok(())
}

/// All `min(rows, cols)` singular values of `x` at `digits` decimal digits.
pub fn singular_values(x: &DesignMatrix, digits: u32) -> Result<SingularSpectrum> {
    check_digits(digits)?;
    let a = x.materialize::<ExtReal>(Precision::digits(digits));
    let out = svd(&a, false, JacobiOptions::for_digits(digits))?;
    Ok(SingularSpectrum::new(out.values, digits, Some(x.kind())))
}

/// Singular values together with the left singular vectors (`rows ×
/// min(rows, cols)`), ordered like the spectrum.
pub fn left_singular_basis(
    x: &DesignMatrix,
    digits: u32,
) -> Result<(SingularSpectrum, Matrix<ExtReal>)> {
    check_digits(digits)?;
    let a = x.materialize::<ExtReal>(Precision::digits(digits));
    let out = svd(&a, true, JacobiOptions::for_digits(digits))?;
    let u = out.u.expect("requested basis");
    Ok((SingularSpectrum::new(out.values, digits, Some(x.kind())), u))
}
