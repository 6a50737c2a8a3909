use alloc::vec::Vec;

use crate::error::ensure;
use crate::real::Real;
use crate::spectral::{line_fit, SingularSpectrum};
use crate::{Error, Result};

/// Minimum number of points on each side of the breakpoint.
const MIN_SEGMENT: usize = 8;

/// Two-line fit of `log10 σ_j` against `j`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct KinkSplit {
    /// Last index (1-based) of the first segment.
    pub j_kink: usize,
    pub slope_lo: f64,
    pub slope_hi: f64,
    pub sse: f64,
}

/// Exhaustive search for the breakpoint minimising the total squared
/// residual of two independent least-squares lines. Values at or below
/// `10^{-(digits-12)} σ_1` are dropped first.
pub fn kink_split(spectrum: &SingularSpectrum) -> Result<KinkSplit> {
    let values = spectrum.values();
    ensure!(values.len() >= 20, "kink analysis needs at least 20 values, got {}", values.len());
    let floor = values[0].log10_abs() - (spectrum.digits() as f64 - 12.0);
    let mut xs = Vec::new();
    let mut ys = Vec::new();
    for (i, v) in values.iter().enumerate() {
        if v.is_zero() {
            continue;
        }
        let l = v.log10_abs();
        if l > floor {
            xs.push((i + 1) as f64);
            ys.push(l);
        }
    }
    ensure!(
        xs.len() >= 2 * MIN_SEGMENT,
        "only {} values lie above the accuracy floor",
        xs.len()
    );
    let mut best: Option<KinkSplit> = None;
    for b in MIN_SEGMENT..=xs.len() - MIN_SEGMENT {
        let lo = line_fit(&xs[..b], &ys[..b])?;
        let hi = line_fit(&xs[b..], &ys[b..])?;
        let sse = lo.sse + hi.sse;
        if best.map_or(true, |k| sse < k.sse) {
            best = Some(KinkSplit {
                j_kink: xs[b - 1] as usize,
                slope_lo: lo.slope,
                slope_hi: hi.slope,
                sse,
            });
        }
    }
    let best = best.expect("at least one breakpoint");
    let scale = best.slope_lo.abs().max(best.slope_hi.abs());
    if (best.slope_lo - best.slope_hi).abs() <= 0.05 * scale {
        return Err(Error::Degenerate(alloc::format!(
            "slopes {:.4} and {:.4} are within 5%",
            best.slope_lo, best.slope_hi
        )));
    }
    Ok(best)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::real::{ExtReal, Precision};
    use num_traits::Float;

    fn spectrum(f: impl Fn(usize) -> f64, n: usize) -> SingularSpectrum {
        let p = Precision::digits(60);
        SingularSpectrum::new((1..=n).map(|j| ExtReal::new(f(j), p)).collect(), 60, None)
    }

    #[test]
    fn synthetic_two_rates() {
        let fast = 4.236f64;
        let s = spectrum(|j| fast.powi(-(j as i32)).max(1e-10 * 2f64.powi(-(j as i32))), 80);
        let k = kink_split(&s).unwrap();
        // curves cross at j = 10/log10(4.236/2) ≈ 30.7
        assert!((30..=31).contains(&k.j_kink), "{k:?}");
        assert!((k.slope_lo + fast.log10()).abs() < 1e-3);
        assert!((k.slope_hi + 2f64.log10()).abs() < 1e-3);
    }

    #[test]
    fn single_rate_is_degenerate() {
        let s = spectrum(|j| 2f64.powi(-(j as i32)), 60);
        assert!(matches!(kink_split(&s), Err(Error::Degenerate(_))));
        assert!(kink_split(&spectrum(|j| 1.0 / j as f64, 10)).is_err());
    }
}
