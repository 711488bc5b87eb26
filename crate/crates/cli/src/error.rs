use std::path::PathBuf;

use thiserror::Error;

/// Process exit status.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ExitCode {
    Ok = 0,
    Usage = 1,
    Domain = 2,
    NonConvergence = 3,
}

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),

    #[error("cannot read {path}: {source}")]
    Read { path: PathBuf, source: std::io::Error },

    #[error("cannot write {path}: {source}")]
    Write { path: PathBuf, source: std::io::Error },

    #[error("config file {path}: {detail}")]
    Config { path: PathBuf, detail: String },

    #[error("{path}:{line}: {detail}")]
    Profile { path: String, line: u64, detail: String },

    #[error(transparent)]
    Core(#[from] fde_core::Error),

    /// A result that is itself a failure verdict (complex domain, violated bound, unverified table).
    #[error("{0}")]
    Verdict(String),
}

impl CliError {
    pub fn exit_code(&self) -> ExitCode {
        use fde_core::Error as E;
        match self {
            CliError::Usage(_) | CliError::Read { .. } | CliError::Write { .. } | CliError::Config { .. } => {
                ExitCode::Usage
            }
            CliError::Profile { .. } | CliError::Verdict(_) => ExitCode::Domain,
            CliError::Core(e) => match e {
                E::Quadrature { .. } | E::NonFiniteIntegrand { .. } | E::NonConvergence { .. } => {
                    ExitCode::NonConvergence
                }
                E::Parse { .. } => ExitCode::Usage,
                _ => ExitCode::Domain,
            },
        }
    }
}

pub type Result<T> = std::result::Result<T, CliError>;
