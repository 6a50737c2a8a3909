//! Model parameter files.
//!
//! ```json
//! { "kind": "expsum",   "params": { "amplitudes": [1.0], "rates": [0.5] } }
//! { "kind": "reaction", "params": { "theta": [1.0, 0.5, 1.0, 2.0] } }
//! { "kind": "sir",      "params": { "beta": 3.0, "gamma": 1.0, "n_tot": 10.0, "i0": 1.0, "r0": 0.0 } }
//! ```
//!
//! Optional keys: `"map": {"offset": .., "scale": ..}` relating the physical
//! variable to t in [-1, 1] (default: [0, 1]), and `"activation":
//! {"energies": [..], "s_map": {..}}` for the two-variable models.

use std::path::Path;

use hyperribbon_core::models::{Activation2D, InputMap, Model, ModelKind};
use serde::{Deserialize, Serialize};

use crate::CliError;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MapSpec {
    pub offset: f64,
    pub scale: f64,
}

impl MapSpec {
    pub fn to_map(self) -> Result<InputMap, CliError> {
        Ok(InputMap::new(self.offset, self.scale)?)
    }
}

impl From<InputMap> for MapSpec {
    fn from(m: InputMap) -> Self {
        MapSpec {
            offset: m.offset,
            scale: m.scale,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", content = "params", rename_all = "lowercase", deny_unknown_fields)]
pub enum ParamSpec {
    Expsum { amplitudes: Vec<f64>, rates: Vec<f64> },
    Reaction { theta: [f64; 4] },
    Sir { beta: f64, gamma: f64, n_tot: f64, i0: f64, #[serde(default)] r0: f64 },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ActivationSpec {
    pub energies: Vec<f64>,
    #[serde(default)]
    pub s_map: Option<MapSpec>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ModelFile {
    #[serde(flatten)]
    pub params: ParamSpec,
    #[serde(default)]
    pub map: Option<MapSpec>,
    #[serde(default)]
    pub activation: Option<ActivationSpec>,
}

pub enum LoadedModel {
    One(Model),
    Two(Activation2D),
}

impl ModelFile {
    pub fn read(path: &Path) -> Result<Self, CliError> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| CliError::Config(format!("cannot read {}: {e}", path.display())))?;
        Self::parse(&text).map_err(|e| CliError::Config(format!("{}: {e}", path.display())))
    }

    pub fn parse(text: &str) -> Result<Self, String> {
        let value: serde_json::Value = serde_json::from_str(text).map_err(|e| e.to_string())?;
        if let Some(obj) = value.as_object() {
            for key in obj.keys() {
                if !["kind", "params", "map", "activation"].contains(&key.as_str()) {
                    return Err(format!("unknown key `{key}`"));
                }
            }
        }
        serde_json::from_value(value).map_err(|e| e.to_string())
    }

    pub fn kind(&self) -> ModelKind {
        match self.params {
            ParamSpec::Expsum { .. } => ModelKind::ExpSum,
            ParamSpec::Reaction { .. } => ModelKind::Reaction,
            ParamSpec::Sir { .. } => ModelKind::Sir,
        }
    }

    pub fn build(&self) -> Result<LoadedModel, CliError> {
        let map = match self.map {
            Some(m) => m.to_map()?,
            None => InputMap::UNIT_INTERVAL,
        };
        let flat: Vec<f64> = match &self.params {
            ParamSpec::Expsum { amplitudes, rates } => {
                if amplitudes.len() != rates.len() {
                    return Err(CliError::Config(format!(
                        "{} amplitudes but {} rates",
                        amplitudes.len(),
                        rates.len()
                    )));
                }
                amplitudes.iter().chain(rates).copied().collect()
            }
            ParamSpec::Reaction { theta } => theta.to_vec(),
            ParamSpec::Sir { beta, gamma, n_tot, i0, r0 } => vec![*beta, *gamma, *n_tot, *i0, *r0],
        };
        let model = Model::from_params(self.kind(), &flat, map)?;
        Ok(match &self.activation {
            None => LoadedModel::One(model),
            Some(a) => {
                let s_map = match a.s_map {
                    Some(m) => m.to_map()?,
                    None => InputMap::IDENTITY,
                };
                LoadedModel::Two(Activation2D::new(model, a.energies.clone())?.with_s_map(s_map))
            }
        })
    }
}
