//! Command-line front end for `fde-core`.

pub mod args;
pub mod commands;
pub mod config;
pub mod corpus;
pub mod error;
pub mod plot;
pub mod profile;
pub mod render;

use std::io::Write;

use args::{Cli, Command, VelocityCommand};
use commands::Outcome;
use config::Settings;
use error::{CliError, ExitCode, Result};

/// Execute a parsed command line.
pub fn execute(cli: &Cli) -> Result<Outcome> {
    let s = Settings::resolve(&cli.global)?;
    match &cli.command {
        Command::Entropy(a) => commands::entropy(a, &s),
        Command::Table2 => commands::table2(&s),
        Command::Bounds(a) => commands::bounds(a, &s),
        Command::Velocity(VelocityCommand::Fit(a)) => commands::velocity_fit(a, &s),
        Command::Velocity(VelocityCommand::Predict(a)) => commands::velocity_predict(a, &s),
        Command::Plot(a) => commands::plot(a, &s),
    }
}

fn write_file(path: &std::path::Path, text: &str) -> Result<()> {
    if let Some(dir) = path.parent().filter(|d| !d.as_os_str().is_empty()) {
        std::fs::create_dir_all(dir).map_err(|source| CliError::Write { path: dir.into(), source })?;
    }
    std::fs::write(path, text).map_err(|source| CliError::Write { path: path.into(), source })
}

/// Run, emit output, and return the exit status.
pub fn run(cli: &Cli) -> ExitCode {
    let result = execute(cli).and_then(|out| {
        let s = Settings::resolve(&cli.global)?;
        let text = match &out.raw {
            Some(raw) => raw.clone(),
            None => out.report.render(s.format, s.precision)?,
        };
        match &s.out {
            Some(p) => write_file(p, &text)?,
            None => {
                let mut stdout = std::io::stdout().lock();
                let _ = stdout.write_all(text.as_bytes());
            }
        }
        for (p, body) in &out.files {
            write_file(p, body)?;
        }
        Ok(out.verdict)
    });
    match result {
        Ok(None) => ExitCode::Ok,
        Ok(Some(v)) | Err(v) => {
            eprintln!("error: {v}");
            v.exit_code()
        }
    }
}
