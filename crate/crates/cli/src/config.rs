//! Command-line flags, config files and their merge into one effective
//! configuration (flags over file over defaults).

use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use hyperribbon_core::manifold::{default_prior, ParamPrior, Prior};
use hyperribbon_core::models::ModelKind;
use serde::{Deserialize, Serialize};

use crate::CliError;

#[derive(Debug, Parser)]
#[command(name = "hyperribbon", version, about = "Hyperellipsoid width bounds for smooth multiparameter models")]
pub struct Cli {
    #[command(subcommand)]
    pub command: CommandName,
    #[command(flatten)]
    pub flags: Flags,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Subcommand, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum CommandName {
    /// Taylor and Chebyshev width reports in one variable.
    Bounds1d,
    /// Width reports for the bivariate designs.
    Bounds2d,
    /// Two-regime decay of the Taylor spectrum.
    Kink,
    /// Algebraic decay for finitely smooth models.
    Nonanalytic,
    /// Sample a model manifold, project it and check enclosure.
    Sample,
    /// Project an existing cloud and check enclosure.
    Project,
    /// Run the property suites.
    Verify,
}

impl CommandName {
    pub fn name(self) -> &'static str {
        match self {
            CommandName::Bounds1d => "bounds1d",
            CommandName::Bounds2d => "bounds2d",
            CommandName::Kink => "kink",
            CommandName::Nonanalytic => "nonanalytic",
            CommandName::Sample => "sample",
            CommandName::Project => "project",
            CommandName::Verify => "verify",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ModelArg {
    Expsum,
    Reaction,
    Sir,
}

impl ModelArg {
    pub fn kind(self) -> ModelKind {
        match self {
            ModelArg::Expsum => ModelKind::ExpSum,
            ModelArg::Reaction => ModelKind::Reaction,
            ModelArg::Sir => ModelKind::Sir,
        }
    }

    pub fn from_kind(kind: ModelKind) -> Self {
        match kind {
            ModelKind::ExpSum => ModelArg::Expsum,
            ModelKind::Reaction => ModelArg::Reaction,
            ModelKind::Sir => ModelArg::Sir,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Csv,
    Json,
    Svg,
}

/// One prior law as written in a config file.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "law", rename_all = "lowercase", deny_unknown_fields)]
pub enum PriorSpec {
    Uniform { lo: f64, hi: f64 },
    Loguniform { lo: f64, hi: f64 },
    Fixed { value: f64 },
}

impl PriorSpec {
    pub fn to_prior(self) -> Result<Prior, CliError> {
        let p = match self {
            PriorSpec::Uniform { lo, hi } => Prior::uniform(lo, hi),
            PriorSpec::Loguniform { lo, hi } => Prior::log_uniform(lo, hi),
            PriorSpec::Fixed { value } => Prior::fixed(value),
        };
        p.map_err(|e| CliError::Config(e.to_string()))
    }

    pub fn from_prior(p: &Prior) -> Self {
        match *p {
            Prior::Uniform { lo, hi } => PriorSpec::Uniform { lo, hi },
            Prior::LogUniform { lo, hi } => PriorSpec::Loguniform { lo, hi },
            Prior::Fixed(value) => PriorSpec::Fixed { value },
        }
    }
}

/// Every tunable. Each field is optional so that flags, a config file and
/// defaults can be layered; the same keys are used in config files.
#[derive(Debug, Clone, Default, Args, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct Flags {
    /// JSON config file; flags override its keys.
    #[arg(long, global = true)]
    #[serde(skip)]
    pub config: Option<PathBuf>,
    /// Subcommand the file was written for (files only).
    #[arg(skip)]
    pub command: Option<CommandName>,
    /// Taylor budget constant C.
    #[arg(long = "C", global = true)]
    #[serde(rename = "C")]
    pub c: Option<f64>,
    /// Taylor budget radius R.
    #[arg(long = "R", global = true)]
    #[serde(rename = "R")]
    pub r: Option<f64>,
    /// Chebyshev budget bound M.
    #[arg(long = "M", global = true)]
    #[serde(rename = "M")]
    pub m: Option<f64>,
    /// Bernstein ellipse parameter.
    #[arg(long, global = true)]
    pub rho: Option<f64>,
    /// Sets rho = zeta + sqrt(zeta^2 + 1).
    #[arg(long, global = true)]
    pub zeta: Option<f64>,
    /// Number of basis functions (order).
    #[arg(long = "N", global = true)]
    #[serde(rename = "N")]
    pub n: Option<usize>,
    /// Smoothness orders, comma separated.
    #[arg(long, global = true, value_delimiter = ',')]
    pub nu: Option<Vec<u32>>,
    /// Grid points (per axis in two variables).
    #[arg(long, global = true)]
    pub grid: Option<usize>,
    #[arg(long, global = true, value_enum)]
    pub model: Option<ModelArg>,
    /// Exponential terms in the sum-of-exponentials model.
    #[arg(long, global = true)]
    pub terms: Option<usize>,
    /// Accepted samples to collect.
    #[arg(long, global = true)]
    pub samples: Option<usize>,
    #[arg(long, global = true)]
    pub seed: Option<u64>,
    /// Working precision in decimal digits.
    #[arg(long, global = true)]
    pub precision: Option<u32>,
    /// Output directory.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    /// Outputs to write, comma separated.
    #[arg(long, global = true, value_enum, value_delimiter = ',')]
    pub format: Option<Vec<Format>>,
    /// Omit the timestamp comment from SVG files.
    #[arg(long, global = true, num_args = 0..=1, default_missing_value = "true")]
    pub deterministic: Option<bool>,
    /// Trials per property (verify).
    #[arg(long, global = true)]
    pub trials: Option<usize>,
    /// Equispaced constraint check points per axis.
    #[arg(long, global = true)]
    pub check_grid: Option<usize>,
    /// Also constrain the k = N derivative term.
    #[arg(long, global = true, num_args = 0..=1, default_missing_value = "true")]
    pub include_order_n: Option<bool>,
    /// 1 or 2 input variables (sample, project).
    #[arg(long, global = true)]
    pub dims: Option<usize>,
    /// Directory holding cloud.csv and cloud.json (project).
    #[arg(long, global = true)]
    pub cloud: Option<PathBuf>,
    /// Grading factors for the eigenvalue suite (verify), comma separated.
    #[arg(long, global = true, value_delimiter = ',')]
    pub eps: Option<Vec<f64>>,
    /// Model parameter file to check against the budget (verify).
    #[arg(long, global = true)]
    pub model_file: Option<PathBuf>,
    /// Prior laws in parameter order (files only).
    #[arg(skip)]
    pub prior: Option<Vec<PriorSpec>>,
}

macro_rules! layer {
    ($hi:expr, $lo:expr; $($f:ident),*) => {
        Flags { $($f: $hi.$f.or($lo.$f),)* }
    };
}

impl Flags {
    /// `self` where set, else `file`.
    pub fn over(self, file: Flags) -> Flags {
        layer!(self, file; config, command, c, r, m, rho, zeta, n, nu, grid, model, terms, samples, seed,
            precision, out, format, deterministic, trials, check_grid, include_order_n, dims, cloud,
            eps, model_file, prior)
    }

    pub fn from_file(path: &Path) -> Result<Flags, CliError> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| CliError::Config(format!("cannot read {}: {e}", path.display())))?;
        serde_json::from_str(&text).map_err(|e| CliError::Config(format!("{}: {e}", path.display())))
    }
}

/// The effective configuration of one run, echoed to `run.json`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Config {
    pub command: CommandName,
    #[serde(rename = "C")]
    pub c: f64,
    #[serde(rename = "R")]
    pub r: f64,
    #[serde(rename = "M")]
    pub m: f64,
    pub rho: f64,
    pub zeta: Option<f64>,
    #[serde(rename = "N")]
    pub n: usize,
    pub nu: Vec<u32>,
    pub grid: usize,
    pub model: ModelArg,
    pub terms: usize,
    pub samples: usize,
    pub seed: u64,
    pub precision: u32,
    pub out: PathBuf,
    pub format: Vec<Format>,
    pub deterministic: bool,
    pub trials: usize,
    pub check_grid: usize,
    pub include_order_n: bool,
    pub dims: usize,
    pub cloud: Option<PathBuf>,
    pub eps: Vec<f64>,
    pub model_file: Option<PathBuf>,
    pub prior: Vec<PriorSpec>,
}

impl Config {
    /// Layers flags over the optional config file over per-command defaults.
    pub fn resolve(command: CommandName, flags: Flags) -> Result<Config, CliError> {
        let file = match &flags.config {
            Some(path) => Flags::from_file(path)?,
            None => Flags::default(),
        };
        if let Some(c) = file.command {
            if c != command {
                return Err(CliError::Config(format!(
                    "config file is for `{}`, not `{}`",
                    c.name(),
                    command.name()
                )));
            }
        }
        let f = flags.over(file);
        let dims = f.dims.unwrap_or(1);
        if !(1..=2).contains(&dims) {
            return Err(CliError::Config(format!("dims must be 1 or 2, got {dims}")));
        }
        let two = dims == 2 || command == CommandName::Bounds2d;
        let n = f.n.unwrap_or(match command {
            CommandName::Kink => 100,
            CommandName::Nonanalytic => 60,
            CommandName::Bounds2d => 6,
            _ if two => 6,
            _ => 11,
        });
        let model = f.model.unwrap_or(ModelArg::Expsum);
        let rho = match (f.zeta, f.rho) {
            (Some(z), _) => hyperribbon_core::chebkit::bernstein_rho(z).map_err(|e| CliError::Config(e.to_string()))?,
            (None, Some(r)) => r,
            (None, None) if two => 4.1,
            (None, None) => 3.81,
        };
        let cfg = Config {
            command,
            c: f.c.unwrap_or(1.0),
            r: f.r.unwrap_or(2.0),
            m: f.m.unwrap_or(1.0),
            rho,
            zeta: f.zeta,
            n,
            nu: f.nu.unwrap_or_else(|| vec![1, 3, 5]),
            grid: f.grid.unwrap_or(if two { 5 } else { n }),
            model,
            terms: f.terms.unwrap_or(11),
            samples: f.samples.unwrap_or(match (two, model) {
                (true, _) => 2000,
                (false, ModelArg::Expsum) => 42_000,
                (false, ModelArg::Reaction) => 24_000,
                (false, ModelArg::Sir) => 20_000,
            }),
            seed: f.seed.unwrap_or(20_240_601),
            precision: f.precision.unwrap_or(60),
            out: f.out.unwrap_or_else(|| PathBuf::from("out")),
            format: f.format.unwrap_or_else(|| vec![Format::Csv, Format::Json, Format::Svg]),
            deterministic: f.deterministic.unwrap_or(false),
            trials: f.trials.unwrap_or(500),
            check_grid: f.check_grid.unwrap_or(if two { 21 } else { 201 }),
            include_order_n: f.include_order_n.unwrap_or(false),
            dims: if command == CommandName::Bounds2d { 2 } else { dims },
            cloud: f.cloud,
            eps: f.eps.unwrap_or_else(|| (1..=9).map(|k| k as f64 / 10.0).collect()),
            model_file: f.model_file,
            prior: f.prior.unwrap_or_default(),
        };
        cfg.validate()?;
        Ok(cfg)
    }

    fn validate(&self) -> Result<(), CliError> {
        let bad = |m: String| Err(CliError::Config(m));
        if !(self.c > 0.0) || !(self.r > 1.0) || !(self.m > 0.0) || !(self.rho > 1.0) {
            return bad(format!(
                "need C > 0, R > 1, M > 0, rho > 1 (got C={}, R={}, M={}, rho={})",
                self.c, self.r, self.m, self.rho
            ));
        }
        if self.n < 1 {
            return bad("N must be at least 1".into());
        }
        if self.grid < 1 {
            return bad("grid must be at least 1".into());
        }
        if self.precision < 15 {
            return bad(format!("precision must be at least 15 digits, got {}", self.precision));
        }
        if self.samples < 1 || self.trials < 1 || self.terms < 1 {
            return bad("samples, trials and terms must be positive".into());
        }
        if self.check_grid < 2 {
            return bad("check_grid must be at least 2".into());
        }
        if self.nu.iter().any(|&v| v < 1) {
            return bad("nu values must be at least 1".into());
        }
        Ok(())
    }

    pub fn wants(&self, f: Format) -> bool {
        self.format.contains(&f)
    }

    pub fn two_d(&self) -> bool {
        self.dims == 2
    }

    /// The configured prior, or the built-in one. ExpSum files may give one
    /// law per group (amplitudes, rates, energies) instead of one per
    /// parameter.
    pub fn param_prior(&self) -> Result<ParamPrior, CliError> {
        let kind = self.model.kind();
        let base = default_prior(kind, self.terms, self.two_d()).map_err(|e| CliError::Config(e.to_string()))?;
        if self.prior.is_empty() {
            return Ok(base);
        }
        let laws: Vec<Prior> = self.prior.iter().map(|p| p.to_prior()).collect::<Result<_, _>>()?;
        let groups = if self.two_d() { 3 } else { 2 };
        let laws = if kind == ModelKind::ExpSum && laws.len() == groups {
            laws.iter().flat_map(|l| std::iter::repeat_n(*l, self.terms)).collect()
        } else {
            laws
        };
        if laws.len() != base.len() {
            return Err(CliError::Config(format!(
                "prior has {} laws, the {} model needs {}",
                laws.len(),
                kind.name(),
                base.len()
            )));
        }
        ParamPrior::new(laws).map_err(|e| CliError::Config(e.to_string()))
    }
}
