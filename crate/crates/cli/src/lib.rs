//! Experiment runner: width reports, kink and smoothness studies, manifold
//! sampling with enclosure checks, and the property suites. Each command
//! writes CSV/JSON/SVG files into an output directory.

pub mod cloudio;
pub mod commands;
pub mod config;
pub mod modelfile;
pub mod output;
pub mod svg;
pub mod verify;

pub use config::{Cli, CommandName, Config, Flags};

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("config error: {0}")]
    Config(String),
    #[error(transparent)]
    Component(#[from] hyperribbon_core::Error),
    #[error("property failure: {0}")]
    Property(String),
    #[error("io error: {0}")]
    Io(#[from] std::io::Error),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Component(_) | CliError::Io(_) => 1,
            CliError::Config(_) => 2,
            CliError::Property(_) => 3,
        }
    }
}

/// Resolves the configuration and runs one command. Returns the lines
/// printed as the run summary.
pub fn run(cli: Cli) -> Result<Vec<String>, CliError> {
    let cfg = Config::resolve(cli.command, cli.flags)?;
    let mut out = output::Output::new(&cfg)?;
    out.json("run.json", &cfg)?;
    match cfg.command {
        CommandName::Bounds1d => commands::bounds1d(&cfg, &mut out),
        CommandName::Bounds2d => commands::bounds2d(&cfg, &mut out),
        CommandName::Kink => commands::kink(&cfg, &mut out),
        CommandName::Nonanalytic => commands::nonanalytic(&cfg, &mut out),
        CommandName::Sample => commands::sample(&cfg, &mut out),
        CommandName::Project => commands::project(&cfg, &mut out),
        CommandName::Verify => verify::run(&cfg, &mut out),
    }
}
