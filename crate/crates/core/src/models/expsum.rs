use alloc::vec::Vec;

use num_traits::Float;

use super::series::Ring;
use crate::error::ensure;
use crate::Result;

/// `y(x) = Σ_α A_α exp(−λ_α x)`.
#[derive(Debug, Clone, PartialEq)]
pub struct ExpSum {
    amps: Vec<f64>,
    rates: Vec<f64>,
}

impl ExpSum {
    pub fn new(amps: Vec<f64>, rates: Vec<f64>) -> Result<Self> {
        ensure!(!amps.is_empty(), "need at least one exponential term");
        ensure!(
            amps.len() == rates.len(),
            "{} amplitudes but {} rates",
            amps.len(),
            rates.len()
        );
        ensure!(
            amps.iter().chain(&rates).all(|x| x.is_finite()),
            "exponential parameters must be finite"
        );
        Ok(ExpSum { amps, rates })
    }

    pub fn amps(&self) -> &[f64] {
        &self.amps
    }

    pub fn rates(&self) -> &[f64] {
        &self.rates
    }

    pub fn terms(&self) -> usize {
        self.amps.len()
    }

    pub fn value(&self, x: f64) -> f64 {
        self.amps
            .iter()
            .zip(&self.rates)
            .map(|(a, l)| a * (-l * x).exp())
            .sum()
    }
}

/// `a_k = Σ_α A_α (−λ_α σ)^k e^{−λ_α x0}/k!` for `k ≤ order`; `σ = dx/dt`.
pub(crate) fn expsum_jet<R: Ring>(
    amps: &[f64],
    rates: &[R],
    x0: f64,
    sigma: f64,
    order: usize,
) -> Vec<R> {
    let like = &rates[0];
    let mut out: Vec<R> = (0..=order).map(|_| R::constant(0.0, like)).collect();
    for (&a, lambda) in amps.iter().zip(rates) {
        let step = (-lambda.clone()).scale(sigma);
        let mut term = (-lambda.clone()).scale(x0).exp().scale(a);
        for (k, slot) in out.iter_mut().enumerate() {
            if k > 0 {
                term = (term * step.clone()).scale(1.0 / k as f64);
            }
            *slot = slot.clone() + term.clone();
        }
    }
    out
}
