use alloc::format;
use alloc::vec;
use alloc::vec::Vec;

use num_traits::Float;
use rand::Rng;

use crate::error::ensure;
use crate::models::ModelKind;
use crate::Result;

/// Sampling law of one parameter.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Prior {
    Uniform { lo: f64, hi: f64 },
    LogUniform { lo: f64, hi: f64 },
    /// A point mass.
    Fixed(f64),
}

impl Prior {
    pub fn uniform(lo: f64, hi: f64) -> Result<Self> {
        ensure!(lo < hi && lo.is_finite() && hi.is_finite(), "uniform prior needs lo < hi, got [{lo}, {hi}]");
        Ok(Prior::Uniform { lo, hi })
    }

    pub fn log_uniform(lo: f64, hi: f64) -> Result<Self> {
        ensure!(
            lo > 0.0 && lo < hi && hi.is_finite(),
            "log-uniform prior needs 0 < lo < hi, got [{lo}, {hi}]"
        );
        Ok(Prior::LogUniform { lo, hi })
    }

    pub fn fixed(v: f64) -> Result<Self> {
        ensure!(v.is_finite(), "fixed prior value must be finite");
        Ok(Prior::Fixed(v))
    }

    pub fn validate(&self) -> Result<()> {
        match *self {
            Prior::Uniform { lo, hi } => Prior::uniform(lo, hi).map(|_| ()),
            Prior::LogUniform { lo, hi } => Prior::log_uniform(lo, hi).map(|_| ()),
            Prior::Fixed(v) => Prior::fixed(v).map(|_| ()),
        }
    }

    pub fn draw<G: Rng + ?Sized>(&self, rng: &mut G) -> f64 {
        match *self {
            Prior::Uniform { lo, hi } => lo + (hi - lo) * rng.random::<f64>(),
            Prior::LogUniform { lo, hi } => {
                let (a, b) = (lo.ln(), hi.ln());
                (a + (b - a) * rng.random::<f64>()).exp()
            }
            Prior::Fixed(v) => v,
        }
    }
}

/// One law per parameter, in the model's parameter order.
#[derive(Debug, Clone, PartialEq)]
pub struct ParamPrior {
    laws: Vec<Prior>,
}

impl ParamPrior {
    pub fn new(laws: Vec<Prior>) -> Result<Self> {
        ensure!(!laws.is_empty(), "prior needs at least one parameter");
        for law in &laws {
            law.validate()?;
        }
        Ok(ParamPrior { laws })
    }

    pub fn laws(&self) -> &[Prior] {
        &self.laws
    }

    pub fn len(&self) -> usize {
        self.laws.len()
    }

    pub fn is_empty(&self) -> bool {
        self.laws.is_empty()
    }

    pub fn draw<G: Rng + ?Sized>(&self, rng: &mut G) -> Vec<f64> {
        self.laws.iter().map(|l| l.draw(rng)).collect()
    }

    /// Replaces the law of parameter `index`.
    pub fn set(&mut self, index: usize, law: Prior) -> Result<()> {
        law.validate()?;
        ensure!(index < self.laws.len(), "parameter index {index} out of range");
        self.laws[index] = law;
        Ok(())
    }
}

/// Built-in priors. `terms` is the number of exponentials; `energies`
/// appends activation-energy laws for the two-variable models.
pub fn default_prior(kind: ModelKind, terms: usize, energies: bool) -> Result<ParamPrior> {
    ensure!(terms >= 1, "need at least one term");
    let mut laws = match kind {
        ModelKind::ExpSum => {
            let mut l = vec![Prior::log_uniform(1e-3, 1.0)?; terms];
            l.extend(vec![Prior::log_uniform(1e-3, 3.0)?; terms]);
            l
        }
        ModelKind::Reaction => vec![
            Prior::uniform(0.0, 4.0)?,
            Prior::uniform(0.0, 4.0)?,
            Prior::uniform(0.0, 4.0)?,
            Prior::uniform(0.5, 5.0)?,
        ],
        // [β, γ, N_tot, I0, R0] with N_tot = 10, so β/N_tot ~ U(0, 3)
        ModelKind::Sir => vec![
            Prior::uniform(0.0, 30.0)?,
            Prior::uniform(0.0, 3.0)?,
            Prior::fixed(10.0)?,
            Prior::uniform(0.0, 11f64.sqrt())?,
            Prior::fixed(0.0)?,
        ],
    };
    if energies {
        let count = match kind {
            ModelKind::ExpSum => terms,
            ModelKind::Reaction => 4,
            ModelKind::Sir => 2,
        };
        laws.extend(vec![Prior::uniform(-1.0, 1.0)?; count]);
    }
    ParamPrior::new(laws).map_err(|e| crate::Error::Domain(format!("default prior: {e}")))
}
