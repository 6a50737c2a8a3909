//! The exponential-sum, reaction-velocity and SIR models, their
//! temperature-extended variants, Taylor jets and the derivative budget.

mod activation;
mod constraint;
mod expsum;
mod reaction;
pub mod series;
mod sir;

use alloc::format;
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;

pub use activation::Activation2D;
pub use constraint::{
    check_points, constraint_check, constraint_check_2d, ConstraintOptions, ConstraintReport,
};
pub use expsum::ExpSum;
pub use reaction::Reaction;
pub use sir::{Sir, STEP_ORDER};

use crate::error::ensure;
use crate::{Error, Result};

/// Affine relabeling `x = offset + scale·t` of the theory variable `t ∈
/// [−1, 1]` into the physical variable the model is written in.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct InputMap {
    pub offset: f64,
    pub scale: f64,
}

impl InputMap {
    pub const IDENTITY: InputMap = InputMap {
        offset: 0.0,
        scale: 1.0,
    };

    /// `[−1, 1] → [0, 1]`.
    pub const UNIT_INTERVAL: InputMap = InputMap {
        offset: 0.5,
        scale: 0.5,
    };

    pub fn new(offset: f64, scale: f64) -> Result<Self> {
        ensure!(
            offset.is_finite() && scale.is_finite() && scale != 0.0,
            "input map needs finite offset and nonzero scale"
        );
        Ok(InputMap { offset, scale })
    }

    pub fn apply(&self, t: f64) -> f64 {
        self.offset + self.scale * t
    }
}

impl Default for InputMap {
    fn default() -> Self {
        InputMap::IDENTITY
    }
}

/// `a_k = y^{(k)}(t0)/k!` for `k = 0..=K`.
#[derive(Debug, Clone, PartialEq)]
pub struct TaylorJet {
    center: f64,
    coeffs: Vec<f64>,
}

impl TaylorJet {
    pub fn new(center: f64, coeffs: Vec<f64>) -> Result<Self> {
        ensure!(!coeffs.is_empty(), "a jet needs at least one coefficient");
        if coeffs.iter().any(|c| !c.is_finite()) {
            return Err(Error::Evaluation(format!("non-finite jet at t = {center}")));
        }
        Ok(TaylorJet { center, coeffs })
    }

    pub fn center(&self) -> f64 {
        self.center
    }

    pub fn coeffs(&self) -> &[f64] {
        &self.coeffs
    }

    pub fn order(&self) -> usize {
        self.coeffs.len() - 1
    }

    /// The jet polynomial at `t`.
    pub fn eval(&self, t: f64) -> f64 {
        let h = t - self.center;
        self.coeffs.iter().rev().fold(0.0, |acc, c| acc * h + c)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum ModelKind {
    ExpSum,
    Reaction,
    Sir,
}

impl ModelKind {
    pub fn name(self) -> &'static str {
        match self {
            ModelKind::ExpSum => "expsum",
            ModelKind::Reaction => "reaction",
            ModelKind::Sir => "sir",
        }
    }

    pub fn parse(name: &str) -> Result<Self> {
        match name {
            "expsum" => Ok(ModelKind::ExpSum),
            "reaction" => Ok(ModelKind::Reaction),
            "sir" => Ok(ModelKind::Sir),
            _ => Err(Error::Domain(format!("unknown model kind `{name}`"))),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum Family {
    ExpSum(ExpSum),
    Reaction(Reaction),
    Sir(Sir),
}

/// A model family instance read through an input map.
#[derive(Debug, Clone, PartialEq)]
pub struct Model {
    family: Family,
    map: InputMap,
}

impl Model {
    pub fn new(family: Family) -> Self {
        Model {
            family,
            map: InputMap::IDENTITY,
        }
    }

    pub fn expsum(amps: Vec<f64>, rates: Vec<f64>) -> Result<Self> {
        Ok(Model::new(Family::ExpSum(ExpSum::new(amps, rates)?)))
    }

    pub fn reaction(theta: [f64; 4]) -> Result<Self> {
        Ok(Model::new(Family::Reaction(Reaction::new(theta)?)))
    }

    pub fn sir(beta: f64, gamma: f64, n_tot: f64, i0: f64, r0: f64) -> Result<Self> {
        Ok(Model::new(Family::Sir(Sir::new(beta, gamma, n_tot, i0, r0)?)))
    }

    pub fn with_map(mut self, map: InputMap) -> Self {
        self.map = map;
        self
    }

    pub fn family(&self) -> &Family {
        &self.family
    }

    pub fn map(&self) -> InputMap {
        self.map
    }

    pub fn kind(&self) -> ModelKind {
        match self.family {
            Family::ExpSum(_) => ModelKind::ExpSum,
            Family::Reaction(_) => ModelKind::Reaction,
            Family::Sir(_) => ModelKind::Sir,
        }
    }

    /// Flat parameter vector; see [`Model::param_names`].
    pub fn params(&self) -> Vec<f64> {
        match &self.family {
            Family::ExpSum(m) => m.amps().iter().chain(m.rates()).copied().collect(),
            Family::Reaction(m) => m.theta().to_vec(),
            Family::Sir(m) => vec![m.beta(), m.gamma(), m.n_tot(), m.i0(), m.r0()],
        }
    }

    pub fn param_names(&self) -> Vec<String> {
        param_names(self.kind(), self.params().len())
    }

    /// Inverse of [`Model::params`]; SIR starts at the left end of the map.
    pub fn from_params(kind: ModelKind, p: &[f64], map: InputMap) -> Result<Self> {
        let model = match kind {
            ModelKind::ExpSum => {
                ensure!(
                    !p.is_empty() && p.len() % 2 == 0,
                    "expsum needs an even number of parameters, got {}",
                    p.len()
                );
                let m = p.len() / 2;
                Model::expsum(p[..m].to_vec(), p[m..].to_vec())?
            }
            ModelKind::Reaction => {
                let theta: [f64; 4] = p.try_into().map_err(|_| Error::Dimension {
                    expected: 4,
                    found: p.len(),
                })?;
                Model::reaction(theta)?
            }
            ModelKind::Sir => {
                ensure!(p.len() == 5, "sir needs [beta, gamma, n_tot, i0, r0], got {} values", p.len());
                let sir = Sir::new(p[0], p[1], p[2], p[3], p[4])?.with_initial_time(map.apply(-1.0));
                Model::new(Family::Sir(sir))
            }
        };
        Ok(model.with_map(map))
    }

    /// `y(t)` for the theory variable `t`.
    pub fn value(&self, t: f64) -> Result<f64> {
        let x = self.map.apply(t);
        match &self.family {
            Family::ExpSum(m) => Ok(m.value(x)),
            Family::Reaction(m) => m.value(x),
            Family::Sir(m) => Ok(m.integrate(&[x])?[0].1),
        }
    }

    /// Predictions at each of `ts`.
    pub fn predict(&self, ts: &[f64]) -> Result<Vec<f64>> {
        match &self.family {
            Family::Sir(m) => {
                let xs: Vec<f64> = ts.iter().map(|&t| self.map.apply(t)).collect();
                Ok(m.integrate(&xs)?.into_iter().map(|s| s.1).collect())
            }
            _ => ts.iter().map(|&t| self.value(t)).collect(),
        }
    }

    /// Jet of order `order` at `t0`, in powers of `t − t0`.
    pub fn jet(&self, t0: f64, order: usize) -> Result<TaylorJet> {
        let mut out = None;
        self.visit_jets(&[t0], order, |_, c| {
            out = Some(c.to_vec());
            true
        })?;
        TaylorJet::new(t0, out.expect("one jet visited"))
    }

    /// Calls `f(index, coeffs)` for the jet at each `ts[index]`, in the order
    /// given (SIR integrates the whole set first); stops when `f` returns false.
    pub fn visit_jets(
        &self,
        ts: &[f64],
        order: usize,
        mut f: impl FnMut(usize, &[f64]) -> bool,
    ) -> Result<()> {
        let sigma = self.map.scale;
        match &self.family {
            Family::ExpSum(m) => {
                for (idx, &t) in ts.iter().enumerate() {
                    let jet = expsum::expsum_jet(m.amps(), m.rates(), self.map.apply(t), sigma, order);
                    if !f(idx, &finite(jet, t)?) {
                        break;
                    }
                }
            }
            Family::Reaction(m) => {
                for (idx, &t) in ts.iter().enumerate() {
                    let jet = reaction::reaction_jet(&m.theta(), self.map.apply(t), sigma, order)?;
                    if !f(idx, &finite(jet, t)?) {
                        break;
                    }
                }
            }
            Family::Sir(m) => {
                let xs: Vec<f64> = ts.iter().map(|&t| self.map.apply(t)).collect();
                let b = m.beta() / m.n_tot();
                let states = sir::trajectory(m.initial_state(), m.initial_time(), &b, &m.gamma(), m.n_tot(), &xs)?;
                for (idx, state) in states.iter().enumerate() {
                    let [_, i, _] = sir::sir_coeffs(state, &b, &m.gamma(), order);
                    let mut pow = 1.0;
                    let jet: Vec<f64> = i
                        .into_iter()
                        .map(|c| {
                            let v = c * pow;
                            pow *= sigma;
                            v
                        })
                        .collect();
                    if !f(idx, &finite(jet, ts[idx])?) {
                        break;
                    }
                }
            }
        }
        Ok(())
    }
}

fn finite(jet: Vec<f64>, t: f64) -> Result<Vec<f64>> {
    if jet.iter().all(|c| c.is_finite()) {
        Ok(jet)
    } else {
        Err(Error::Evaluation(format!("non-finite jet at t = {t}")))
    }
}

/// Column names for a parameter vector of length `len`.
pub fn param_names(kind: ModelKind, len: usize) -> Vec<String> {
    match kind {
        ModelKind::ExpSum => {
            let m = len / 2;
            (0..m)
                .map(|a| format!("A_{a}"))
                .chain((0..m).map(|a| format!("lambda_{a}")))
                .collect()
        }
        ModelKind::Reaction => (1..=4).map(|a| format!("theta_{a}")).collect(),
        ModelKind::Sir => ["beta", "gamma", "n_tot", "i0", "r0"].iter().map(|s| String::from(*s)).collect(),
    }
}

#[cfg(test)]
mod tests;
