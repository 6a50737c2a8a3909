use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;

use crate::error::ensure;
use crate::real::{ExtReal, Real};
use crate::spectral::SingularSpectrum;
use crate::Result;

/// One hyperellipsoid axis.
#[derive(Debug, Clone, PartialEq)]
pub struct WidthRecord {
    /// 1-based axis index.
    pub j: usize,
    pub sigma: ExtReal,
    /// `2rσ_j`.
    pub ell_p: ExtReal,
    /// `ell_p + 2·err`.
    pub ell_y: ExtReal,
    pub bound_taylor: Option<f64>,
    pub bound_cheb: Option<f64>,
    pub empirical: Option<f64>,
}

/// Per-axis widths of `H_P` and `H_Y` with optional closed-form and
/// empirical columns.
#[derive(Debug, Clone, PartialEq)]
pub struct WidthReport {
    records: Vec<WidthRecord>,
    radius: f64,
    err: f64,
}

/// 17 significant digits, e.g. `1.2500000000000000e-3`.
pub fn format_f64(x: f64) -> String {
    format!("{x:.16e}")
}

impl WidthReport {
    /// `ell_P(j) = 2rσ_j`, with `ell_Y = ell_P` until an error is added.
    pub fn from_spectrum(spectrum: &SingularSpectrum, r: f64) -> Result<Self> {
        ensure!(r > 0.0 && r.is_finite(), "radius must be positive, got {r}");
        let records = spectrum
            .values()
            .iter()
            .enumerate()
            .map(|(i, s)| {
                let two_r = ExtReal::from_f64(2.0 * r, s.context());
                let ell = two_r * s.clone();
                WidthRecord {
                    j: i + 1,
                    sigma: s.clone(),
                    ell_p: ell.clone(),
                    ell_y: ell,
                    bound_taylor: None,
                    bound_cheb: None,
                    empirical: None,
                }
            })
            .collect();
        Ok(WidthReport {
            records,
            radius: r,
            err: 0.0,
        })
    }

    /// Sets `ell_Y(j) = ell_P(j) + 2·err`.
    pub fn with_truncation_error(mut self, err: f64) -> Result<Self> {
        ensure!(err >= 0.0 && err.is_finite(), "truncation error must be nonnegative, got {err}");
        for rec in &mut self.records {
            let pad = ExtReal::from_f64(2.0 * err, rec.ell_p.context());
            rec.ell_y = rec.ell_p.clone() + pad;
        }
        self.err = err;
        Ok(self)
    }

    /// Fills the Taylor column from `f(j)`; `None` leaves a cell absent.
    pub fn with_taylor_bound(mut self, f: impl Fn(usize) -> Option<f64>) -> Self {
        for rec in &mut self.records {
            rec.bound_taylor = f(rec.j);
        }
        self
    }

    pub fn with_cheb_bound(mut self, f: impl Fn(usize) -> Option<f64>) -> Self {
        for rec in &mut self.records {
            rec.bound_cheb = f(rec.j);
        }
        self
    }

    /// Attaches measured widths; extra axes beyond the report are ignored.
    pub fn with_empirical(mut self, widths: &[f64]) -> Self {
        for (rec, w) in self.records.iter_mut().zip(widths) {
            rec.empirical = Some(*w);
        }
        self
    }

    pub fn records(&self) -> &[WidthRecord] {
        &self.records
    }

    pub fn radius(&self) -> f64 {
        self.radius
    }

    pub fn err(&self) -> f64 {
        self.err
    }

    pub fn ell_p_f64(&self) -> Vec<f64> {
        self.records.iter().map(|r| r.ell_p.to_f64()).collect()
    }

    pub fn ell_y_f64(&self) -> Vec<f64> {
        self.records.iter().map(|r| r.ell_y.to_f64()).collect()
    }

    /// Axes where a closed-form column falls below `ell_P`.
    pub fn bound_violations(&self) -> Vec<usize> {
        self.records
            .iter()
            .filter(|r| {
                let ell = r.ell_p.to_f64();
                [r.bound_taylor, r.bound_cheb]
                    .iter()
                    .flatten()
                    .any(|&b| b < ell)
            })
            .map(|r| r.j)
            .collect()
    }

    /// `j,sigma,ell_p,ell_y,bound_taylor,bound_cheb,empirical`; extended
    /// columns at full precision when `full` is set, else 17 digits.
    pub fn to_csv(&self, full: bool) -> String {
        let mut out = String::from("j,sigma,ell_p,ell_y,bound_taylor,bound_cheb,empirical\n");
        let ext = |x: &ExtReal| {
            if full {
                x.to_scientific(x.precision().decimal_digits() as usize)
            } else {
                x.to_scientific(17)
            }
        };
        let opt = |x: Option<f64>| x.map(format_f64).unwrap_or_default();
        for r in &self.records {
            out.push_str(&format!(
                "{},{},{},{},{},{},{}\n",
                r.j,
                ext(&r.sigma),
                ext(&r.ell_p),
                ext(&r.ell_y),
                opt(r.bound_taylor),
                opt(r.bound_cheb),
                opt(r.empirical)
            ));
        }
        out
    }
}
