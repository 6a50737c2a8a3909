//! Writes result files into the output directory, honoring `--format`.

use std::path::{Path, PathBuf};
use std::time::{SystemTime, UNIX_EPOCH};

use serde::Serialize;

use crate::config::{Config, Format};
use crate::svg::Plot;
use crate::CliError;

pub struct Output {
    dir: PathBuf,
    formats: Vec<Format>,
    deterministic: bool,
    written: Vec<PathBuf>,
}

impl Output {
    pub fn new(cfg: &Config) -> Result<Self, CliError> {
        std::fs::create_dir_all(&cfg.out)?;
        Ok(Output {
            dir: cfg.out.clone(),
            formats: cfg.format.clone(),
            deterministic: cfg.deterministic,
            written: Vec::new(),
        })
    }

    pub fn dir(&self) -> &Path {
        &self.dir
    }

    pub fn written(&self) -> &[PathBuf] {
        &self.written
    }

    fn put(&mut self, name: &str, text: &str) -> Result<(), CliError> {
        let path = self.dir.join(name);
        std::fs::write(&path, text)?;
        self.written.push(path);
        Ok(())
    }

    pub fn csv(&mut self, name: &str, text: &str) -> Result<(), CliError> {
        if self.formats.contains(&Format::Csv) {
            self.put(name, text)?;
        }
        Ok(())
    }

    /// `run.json` is always written; other JSON files follow `--format`.
    pub fn json(&mut self, name: &str, value: &impl Serialize) -> Result<(), CliError> {
        if name == "run.json" || self.formats.contains(&Format::Json) {
            let text = serde_json::to_string_pretty(value).map_err(|e| CliError::Config(e.to_string()))?;
            self.put(name, &(text + "\n"))?;
        }
        Ok(())
    }

    pub fn svg(&mut self, name: &str, plot: &Plot) -> Result<(), CliError> {
        if self.formats.contains(&Format::Svg) {
            let stamp = (!self.deterministic).then(|| {
                let secs = SystemTime::now().duration_since(UNIX_EPOCH).map_or(0, |d| d.as_secs());
                format!("generated at unix time {secs}")
            });
            self.put(name, &plot.render(stamp.as_deref()))?;
        }
        Ok(())
    }
}
