use alloc::string::String;
use alloc::vec::Vec;
use core::ops::Range;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use super::prior::ParamPrior;
use crate::bounds::TaylorBudget;
use crate::error::ensure;
use crate::models::{
    constraint_check, constraint_check_2d, param_names, Activation2D, ConstraintOptions, InputMap,
    Model, ModelKind,
};
use crate::{Error, Result};

/// Attempts per timeout window.
pub const TIMEOUT_WINDOW: u64 = 10_000_000;
/// Minimum acceptance rate within a window.
pub const TIMEOUT_RATE: f64 = 1e-6;

const BATCH: u64 = 4096;

/// Which family is sampled and how its variables are mapped.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum ModelSpec {
    One { kind: ModelKind, map: InputMap },
    Two { kind: ModelKind, map: InputMap, s_map: InputMap },
}

impl ModelSpec {
    pub fn kind(&self) -> ModelKind {
        match *self {
            ModelSpec::One { kind, .. } | ModelSpec::Two { kind, .. } => kind,
        }
    }

    pub fn is_2d(&self) -> bool {
        matches!(self, ModelSpec::Two { .. })
    }

    fn check_len(&self, len: usize) -> Result<()> {
        let ok = match (self.kind(), self.is_2d()) {
            (ModelKind::ExpSum, false) => len >= 2 && len % 2 == 0,
            (ModelKind::ExpSum, true) => len >= 3 && len % 3 == 0,
            (ModelKind::Reaction, two) => len == if two { 8 } else { 4 },
            (ModelKind::Sir, two) => len == if two { 7 } else { 5 },
        };
        ensure!(ok, "{len} prior laws do not fit a {} model", self.kind().name());
        Ok(())
    }

    pub fn param_names(&self, len: usize) -> Vec<String> {
        match self.is_2d() {
            false => param_names(self.kind(), len),
            true => {
                let base = match self.kind() {
                    ModelKind::ExpSum => len / 3 * 2,
                    ModelKind::Reaction => 4,
                    ModelKind::Sir => 5,
                };
                let mut names = param_names(self.kind(), base);
                match self.kind() {
                    ModelKind::ExpSum => names.extend((0..len / 3).map(|a| alloc::format!("E_{a}"))),
                    ModelKind::Reaction => names.extend((1..=4).map(|a| alloc::format!("E_{a}"))),
                    ModelKind::Sir => names.extend([String::from("E_beta"), String::from("E_gamma")]),
                }
                names
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SamplerConfig {
    pub model: ModelSpec,
    pub prior: ParamPrior,
    pub budget: TaylorBudget,
    /// Prediction nodes `(t, s)`; `s` is ignored for one-variable models.
    pub nodes: Vec<(f64, f64)>,
    pub target: usize,
    pub seed: u64,
    /// Equispaced check points per axis.
    pub check_grid: usize,
    pub include_order_n: bool,
    pub timeout_window: u64,
}

impl SamplerConfig {
    pub fn new(
        model: ModelSpec,
        prior: ParamPrior,
        budget: TaylorBudget,
        nodes: Vec<(f64, f64)>,
        target: usize,
        seed: u64,
    ) -> Self {
        SamplerConfig {
            model,
            prior,
            budget,
            nodes,
            target,
            seed,
            check_grid: if model.is_2d() { 21 } else { 201 },
            include_order_n: false,
            timeout_window: TIMEOUT_WINDOW,
        }
    }

    pub fn validate(&self) -> Result<()> {
        ensure!(self.target >= 1, "target sample count must be at least 1");
        ensure!(!self.nodes.is_empty(), "need at least one prediction node");
        ensure!(self.timeout_window >= 1, "timeout window must be positive");
        self.model.check_len(self.prior.len())
    }

    /// Predictions if `params` passes the budget, `None` if it is rejected.
    pub fn evaluate(&self, params: &[f64]) -> Result<Option<Vec<f64>>> {
        match self.model {
            ModelSpec::One { kind, map } => {
                let model = Model::from_params(kind, params, map)?;
                let opts = ConstraintOptions {
                    grid: self.check_grid,
                    extra_nodes: self.nodes.iter().map(|n| n.0).collect(),
                    include_order_n: self.include_order_n,
                };
                if !constraint_check(&model, &self.budget, &opts)?.passed {
                    return Ok(None);
                }
                let ts: Vec<f64> = self.nodes.iter().map(|n| n.0).collect();
                model.predict(&ts).map(Some)
            }
            ModelSpec::Two { kind, map, s_map } => {
                let ext = Activation2D::from_params(kind, params, map, s_map)?;
                if !constraint_check_2d(&ext, &self.budget, self.check_grid, &self.nodes)?.passed {
                    return Ok(None);
                }
                ext.predict(&self.nodes).map(Some)
            }
        }
    }

    /// Attempt `index`: its own random stream, so the outcome does not
    /// depend on which worker runs it. Parameter sets the model rejects or
    /// cannot evaluate count as rejections.
    pub fn attempt(&self, index: u64) -> Option<Sample> {
        let mut rng = ChaCha8Rng::seed_from_u64(self.seed);
        rng.set_stream(index);
        let params = self.prior.draw(&mut rng);
        match self.evaluate(&params) {
            Ok(Some(predictions)) => Some(Sample {
                attempt: index,
                params,
                predictions,
            }),
            _ => None,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Sample {
    /// Index of the attempt that produced it.
    pub attempt: u64,
    pub params: Vec<f64>,
    pub predictions: Vec<f64>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SampleCloud {
    pub model: ModelSpec,
    pub nodes: Vec<(f64, f64)>,
    pub param_names: Vec<String>,
    pub samples: Vec<Sample>,
    pub seed: u64,
    pub accepted: usize,
    pub attempted: u64,
}

impl SampleCloud {
    pub fn acceptance_rate(&self) -> f64 {
        self.accepted as f64 / self.attempted.max(1) as f64
    }

    pub fn len(&self) -> usize {
        self.samples.len()
    }

    pub fn is_empty(&self) -> bool {
        self.samples.is_empty()
    }

    /// `sample_id,param_1..param_P,y_0..y_{N-1}` with 17 significant
    /// digits. Parameter order follows `param_names`.
    pub fn to_csv(&self) -> String {
        use core::fmt::Write;
        let mut out = String::from("sample_id");
        for k in 1..=self.param_names.len() {
            let _ = write!(out, ",param_{k}");
        }
        for k in 0..self.nodes.len() {
            let _ = write!(out, ",y_{k}");
        }
        out.push('\n');
        for (id, s) in self.samples.iter().enumerate() {
            let _ = write!(out, "{id}");
            for v in s.params.iter().chain(&s.predictions) {
                let _ = write!(out, ",{v:.16e}");
            }
            out.push('\n');
        }
        out
    }
}

/// Sequential sampling.
pub fn sample_cloud(cfg: &SamplerConfig) -> Result<SampleCloud> {
    sample_cloud_batched(cfg, |range| range.map(|i| cfg.attempt(i)).collect())
}

/// Runs attempts in consecutive index batches through `run` (which may
/// evaluate a batch in parallel) and keeps acceptances in attempt order,
/// so the cloud is the same for any evaluator.
pub fn sample_cloud_batched(
    cfg: &SamplerConfig,
    mut run: impl FnMut(Range<u64>) -> Vec<Option<Sample>>,
) -> Result<SampleCloud> {
    cfg.validate()?;
    let mut samples: Vec<Sample> = Vec::with_capacity(cfg.target);
    let mut next = 0u64;
    let mut window_start = 0u64;
    let mut window_accepted = 0usize;
    let mut attempted = 0u64;
    while samples.len() < cfg.target {
        let window_end = window_start + cfg.timeout_window;
        let end = (next + BATCH).min(window_end);
        for s in run(next..end).into_iter().flatten() {
            if samples.len() < cfg.target {
                attempted = s.attempt + 1;
                samples.push(s);
                window_accepted += 1;
            }
        }
        if samples.len() < cfg.target {
            attempted = end;
        }
        next = end;
        if next == window_end {
            if (window_accepted as f64) < TIMEOUT_RATE * cfg.timeout_window as f64 {
                return Err(Error::SamplerTimeout {
                    accepted: samples.len(),
                    attempted,
                });
            }
            window_start = window_end;
            window_accepted = 0;
        }
    }
    Ok(SampleCloud {
        model: cfg.model,
        nodes: cfg.nodes.clone(),
        param_names: cfg.model.param_names(cfg.prior.len()),
        samples,
        seed: cfg.seed,
        accepted: cfg.target,
        attempted,
    })
}
