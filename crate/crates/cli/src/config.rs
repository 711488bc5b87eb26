//! Resolution of global flags: command line, then config file, then defaults.

use std::path::{Path, PathBuf};

use fde_core::QuadratureConfig;
use serde::Deserialize;

use crate::args::{Format, GlobalArgs};
use crate::error::{CliError, Result};

pub const DEFAULT_PRECISION: usize = 4;
pub const MAX_PRECISION: usize = 17;

/// Contents of a `--config` file. Every key is optional.
#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FileConfig {
    pub rel_tol: Option<f64>,
    pub abs_tol: Option<f64>,
    pub seed: Option<u64>,
    pub format: Option<Format>,
    pub out: Option<PathBuf>,
    pub precision: Option<usize>,
}

impl FileConfig {
    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).map_err(|source| CliError::Read { path: path.into(), source })?;
        toml::from_str(&text).map_err(|e| CliError::Config { path: path.into(), detail: e.to_string() })
    }
}

/// Validated settings for one run.
#[derive(Debug, Clone, PartialEq)]
pub struct Settings {
    pub quadrature: QuadratureConfig,
    pub seed: u64,
    pub format: Format,
    pub out: Option<PathBuf>,
    pub precision: usize,
}

impl Settings {
    pub fn resolve(flags: &GlobalArgs) -> Result<Self> {
        let file = match &flags.config {
            Some(p) => FileConfig::load(p)?,
            None => FileConfig::default(),
        };
        let base = QuadratureConfig::default();
        let quadrature = QuadratureConfig {
            rel_tol: flags.rel_tol.or(file.rel_tol).unwrap_or(base.rel_tol),
            abs_tol: flags.abs_tol.or(file.abs_tol).unwrap_or(base.abs_tol),
            ..base
        };
        quadrature.validate().map_err(|e| CliError::Usage(e.to_string()))?;
        let precision = flags.precision.or(file.precision).unwrap_or(DEFAULT_PRECISION);
        if precision > MAX_PRECISION {
            return Err(CliError::Usage(format!("--precision {precision} exceeds {MAX_PRECISION}")));
        }
        Ok(Self {
            quadrature,
            seed: flags.seed.or(file.seed).unwrap_or(0),
            format: flags.format.or(file.format).unwrap_or(Format::Text),
            out: flags.out.clone().or(file.out),
            precision,
        })
    }
}
