//! Run configuration: built-in defaults, then an optional `key=value` file,
//! then command-line flags.

use std::path::{Path, PathBuf};

use nitm_core::NitmConfig;

use crate::args::{Common, Format};
use crate::CliError;

#[derive(Debug, Clone, PartialEq)]
pub struct RunConfig {
    pub nitm: NitmConfig,
    pub format: Format,
    pub out: Option<PathBuf>,
}

impl Default for RunConfig {
    fn default() -> Self {
        Self { nitm: NitmConfig::default(), format: Format::Table, out: None }
    }
}

fn parse_f64(key: &str, v: &str) -> Result<f64, CliError> {
    v.trim().parse().map_err(|_| CliError::Usage(format!("{key}: '{v}' is not a number")))
}

pub fn parse_list(key: &str, v: &str) -> Result<Vec<f64>, CliError> {
    v.split(',').map(|x| parse_f64(key, x)).collect()
}

impl RunConfig {
    /// Applies the lines of a config file. Blank lines and `#` comments are
    /// skipped; unknown keys are an error.
    pub fn apply_file_contents(&mut self, text: &str) -> Result<(), CliError> {
        for (n, line) in text.lines().enumerate() {
            let line = line.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let Some((key, value)) = line.split_once('=') else {
                return Err(CliError::Usage(format!("config line {}: expected key=value", n + 1)));
            };
            let (key, value) = (key.trim(), value.trim());
            match key {
                "step" => self.nitm.step = parse_f64(key, value)?,
                "boundaries" => self.nitm.boundary_schedule = parse_list(key, value)?,
                "lambda_tol" => self.nitm.lambda_tol = parse_f64(key, value)?,
                "format" => {
                    self.format = value
                        .parse()
                        .map_err(|_| CliError::Usage(format!("format: unknown value '{value}'")))?
                }
                "out" => self.out = Some(PathBuf::from(value)),
                other => return Err(CliError::Usage(format!("config line {}: unknown key '{other}'", n + 1))),
            }
        }
        Ok(())
    }

    pub fn apply_flags(&mut self, common: &Common) {
        if let Some(step) = common.step {
            self.nitm.step = step;
        }
        if let Some(b) = &common.boundaries {
            self.nitm.boundary_schedule = b.clone();
        }
        if let Some(tol) = common.lambda_tol {
            self.nitm.lambda_tol = tol;
        }
        if let Some(f) = common.format {
            self.format = f;
        }
        if let Some(out) = &common.out {
            self.out = Some(out.clone());
        }
    }

    pub fn resolve(common: &Common) -> Result<Self, CliError> {
        let mut cfg = Self::default();
        if let Some(path) = &common.config {
            cfg.apply_file_contents(&read(path)?)?;
        }
        cfg.apply_flags(common);
        cfg.nitm.validate().map_err(|e| CliError::Usage(e.to_string()))?;
        Ok(cfg)
    }
}

fn read(path: &Path) -> Result<String, CliError> {
    std::fs::read_to_string(path).map_err(|e| CliError::Usage(format!("cannot read {}: {e}", path.display())))
}
