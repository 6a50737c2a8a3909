//! Least-squares decay rates of spectra.

use num_traits::Float;

use crate::error::ensure;
use crate::real::Real;
use crate::Result;

use super::SingularSpectrum;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum DecayMode {
    /// `log10 σ_j` against `j`.
    Geometric,
    /// `log10 σ_j` against `log10 j`.
    Algebraic,
}

/// Straight-line least-squares fit.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LineFit {
    pub slope: f64,
    pub intercept: f64,
    /// Sum of squared residuals.
    pub sse: f64,
}

pub fn line_fit(xs: &[f64], ys: &[f64]) -> Result<LineFit> {
    ensure!(xs.len() == ys.len(), "x and y lengths differ");
    ensure!(xs.len() >= 2, "a line fit needs at least two points");
    let n = xs.len() as f64;
    let mx = xs.iter().sum::<f64>() / n;
    let my = ys.iter().sum::<f64>() / n;
    let (mut sxx, mut sxy) = (0.0, 0.0);
    for (x, y) in xs.iter().zip(ys) {
        sxx += (x - mx) * (x - mx);
        sxy += (x - mx) * (y - my);
    }
    ensure!(sxx > 0.0, "x values are all equal");
    let slope = sxy / sxx;
    let intercept = my - slope * mx;
    let sse = xs
        .iter()
        .zip(ys)
        .map(|(x, y)| (y - intercept - slope * x).powi(2))
        .sum();
    Ok(LineFit {
        slope,
        intercept,
        sse,
    })
}

/// Decay slope over the 1-based index range `[j_lo, j_hi]`.
pub fn slope_fit(
    spectrum: &SingularSpectrum,
    j_lo: usize,
    j_hi: usize,
    mode: DecayMode,
) -> Result<f64> {
    let values = spectrum.values();
    ensure!(
        1 <= j_lo && j_lo < j_hi && j_hi <= values.len(),
        "fit range [{j_lo}, {j_hi}] invalid for {} values",
        values.len()
    );
    let mut xs = alloc::vec::Vec::with_capacity(j_hi - j_lo + 1);
    let mut ys = alloc::vec::Vec::with_capacity(j_hi - j_lo + 1);
    for j in j_lo..=j_hi {
        let v = &values[j - 1];
        ensure!(!v.is_zero(), "singular value {j} is zero");
        xs.push(match mode {
            DecayMode::Geometric => j as f64,
            DecayMode::Algebraic => (j as f64).log10(),
        });
        ys.push(v.log10_abs());
    }
    Ok(line_fit(&xs, &ys)?.slope)
}
