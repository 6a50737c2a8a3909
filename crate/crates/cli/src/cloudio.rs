//! `cloud.csv` and its `cloud.json` sidecar.

use std::path::Path;

use hyperribbon_core::manifold::{ModelSpec, Sample, SampleCloud, SamplerConfig};
use hyperribbon_core::models::InputMap;
use serde::{Deserialize, Serialize};

use crate::config::{ModelArg, PriorSpec};
use crate::modelfile::MapSpec;
use crate::CliError;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BudgetSpec {
    #[serde(rename = "C")]
    pub c: f64,
    #[serde(rename = "R")]
    pub r: f64,
    #[serde(rename = "N")]
    pub n: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CloudMeta {
    pub model: ModelArg,
    pub dims: usize,
    pub map: MapSpec,
    pub s_map: Option<MapSpec>,
    pub seed: u64,
    pub prior: Vec<PriorSpec>,
    pub budget: BudgetSpec,
    pub check_grid: usize,
    pub include_order_n: bool,
    pub target: usize,
    pub accepted: usize,
    pub attempted: u64,
    pub acceptance_rate: f64,
    pub param_names: Vec<String>,
    /// `(t, s)` per prediction column; `s` is 0 in one variable.
    pub nodes: Vec<(f64, f64)>,
}

impl CloudMeta {
    pub fn new(model: ModelArg, cfg: &SamplerConfig, cloud: &SampleCloud) -> Self {
        let (map, s_map) = match cfg.model {
            ModelSpec::One { map, .. } => (map, None),
            ModelSpec::Two { map, s_map, .. } => (map, Some(s_map.into())),
        };
        CloudMeta {
            model,
            dims: if cfg.model.is_2d() { 2 } else { 1 },
            map: map.into(),
            s_map,
            seed: cfg.seed,
            prior: cfg.prior.laws().iter().map(PriorSpec::from_prior).collect(),
            budget: BudgetSpec {
                c: cfg.budget.c(),
                r: cfg.budget.r(),
                n: cfg.budget.n(),
            },
            check_grid: cfg.check_grid,
            include_order_n: cfg.include_order_n,
            target: cfg.target,
            accepted: cloud.accepted,
            attempted: cloud.attempted,
            acceptance_rate: cloud.acceptance_rate(),
            param_names: cloud.param_names.clone(),
            nodes: cloud.nodes.clone(),
        }
    }

    fn model_spec(&self) -> Result<ModelSpec, CliError> {
        let kind = self.model.kind();
        let map = self.map.to_map()?;
        Ok(match (self.dims, self.s_map) {
            (1, None) => ModelSpec::One { kind, map },
            (2, s) => ModelSpec::Two {
                kind,
                map,
                s_map: s.map_or(Ok(InputMap::IDENTITY), MapSpec::to_map)?,
            },
            _ => return Err(CliError::Config(format!("cloud.json: bad dims {}", self.dims))),
        })
    }
}

/// Reads `cloud.csv` and `cloud.json` from `dir`.
pub fn read_cloud(dir: &Path) -> Result<(CloudMeta, SampleCloud), CliError> {
    let meta_path = dir.join("cloud.json");
    let text = std::fs::read_to_string(&meta_path)
        .map_err(|e| CliError::Config(format!("cannot read {}: {e}", meta_path.display())))?;
    let meta: CloudMeta =
        serde_json::from_str(&text).map_err(|e| CliError::Config(format!("{}: {e}", meta_path.display())))?;
    let p = meta.param_names.len();
    let n = meta.nodes.len();

    let csv_path = dir.join("cloud.csv");
    let bad = |m: String| CliError::Config(format!("{}: {m}", csv_path.display()));
    let mut reader = csv::Reader::from_path(&csv_path).map_err(|e| bad(e.to_string()))?;
    let header = reader.headers().map_err(|e| bad(e.to_string()))?.clone();
    let expected: Vec<String> = std::iter::once("sample_id".to_string())
        .chain((1..=p).map(|k| format!("param_{k}")))
        .chain((0..n).map(|k| format!("y_{k}")))
        .collect();
    if header.iter().ne(expected.iter().map(String::as_str)) {
        return Err(bad(format!("header does not match cloud.json ({p} parameters, {n} nodes)")));
    }
    let mut samples = Vec::new();
    for (row, rec) in reader.records().enumerate() {
        let rec = rec.map_err(|e| bad(e.to_string()))?;
        let vals: Vec<f64> = rec
            .iter()
            .skip(1)
            .map(|v| v.parse::<f64>())
            .collect::<Result<_, _>>()
            .map_err(|e| bad(format!("row {row}: {e}")))?;
        samples.push(Sample {
            attempt: row as u64,
            params: vals[..p].to_vec(),
            predictions: vals[p..].to_vec(),
        });
    }
    let cloud = SampleCloud {
        model: meta.model_spec()?,
        nodes: meta.nodes.clone(),
        param_names: meta.param_names.clone(),
        accepted: samples.len(),
        samples,
        seed: meta.seed,
        attempted: meta.attempted,
    };
    Ok((meta, cloud))
}
