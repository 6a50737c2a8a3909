use alloc::vec::Vec;

use super::series::Ring;
use crate::error::ensure;
use crate::{Error, Result};

/// `y(x) = (θ₁x² + θ₂x)/(x² + θ₃x + θ₄)`.
#[derive(Debug, Clone, PartialEq)]
pub struct Reaction {
    theta: [f64; 4],
}

impl Reaction {
    pub fn new(theta: [f64; 4]) -> Result<Self> {
        ensure!(theta.iter().all(|x| x.is_finite()), "reaction parameters must be finite");
        Ok(Reaction { theta })
    }

    pub fn theta(&self) -> [f64; 4] {
        self.theta
    }

    pub fn value(&self, x: f64) -> Result<f64> {
        let [t1, t2, t3, t4] = self.theta;
        let den = x * x + t3 * x + t4;
        if den == 0.0 {
            return Err(Error::Evaluation(alloc::format!(
                "reaction denominator vanishes at x = {x}"
            )));
        }
        Ok((t1 * x * x + t2 * x) / den)
    }
}

/// Quotient series of the numerator and denominator shifted to `x0`,
/// in powers of `t − t0` with `x − x0 = σ (t − t0)`.
pub(crate) fn reaction_jet<R: Ring>(theta: &[R; 4], x0: f64, sigma: f64, order: usize) -> Result<Vec<R>> {
    let [t1, t2, t3, t4] = theta.clone();
    let like = t1.clone();
    let c = |v: f64| R::constant(v, &like);
    let num = [
        t1.clone().scale(x0 * x0) + t2.clone().scale(x0),
        (t1.clone().scale(2.0 * x0) + t2).scale(sigma),
        t1.scale(sigma * sigma),
    ];
    let den = [
        c(x0 * x0) + t3.clone().scale(x0) + t4,
        (c(2.0 * x0) + t3).scale(sigma),
        c(sigma * sigma),
    ];
    if den[0].lead() == 0.0 {
        return Err(Error::Evaluation(alloc::format!(
            "reaction denominator vanishes at x = {x0}"
        )));
    }
    let inv = den[0].recip()?;
    let mut q: Vec<R> = Vec::with_capacity(order + 1);
    for k in 0..=order {
        let mut acc = if k < 3 { num[k].clone() } else { c(0.0) };
        for m in 1..=k.min(2) {
            acc = acc - den[m].clone() * q[k - m].clone();
        }
        q.push(acc * inv.clone());
    }
    Ok(q)
}
