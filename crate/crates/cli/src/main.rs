mod args;
mod commands;

use std::process::ExitCode;

use clap::Parser;

use args::{Cli, Command};

/// Failure classes, each with its exit code.
#[derive(Debug)]
pub enum CliError {
    /// Bad flags, unreadable input, violated preconditions: exit 2.
    Usage(String),
    /// Singular points, branch crossings, non-convergence: exit 3.
    Numerical(String),
}

impl From<vfwalk::Error> for CliError {
    fn from(e: vfwalk::Error) -> Self {
        if e.is_numerical() {
            CliError::Numerical(e.to_string())
        } else {
            CliError::Usage(e.to_string())
        }
    }
}

fn configure_threads() -> Result<(), CliError> {
    let Ok(raw) = std::env::var("VFWALK_THREADS") else {
        return Ok(());
    };
    let n: usize = raw
        .trim()
        .parse()
        .ok()
        .filter(|&n| n > 0)
        .ok_or_else(|| CliError::Usage(format!("VFWALK_THREADS must be a positive integer, got {raw:?}")))?;
    rayon::ThreadPoolBuilder::new()
        .num_threads(n)
        .build_global()
        .map_err(|e| CliError::Usage(format!("thread pool: {e}")))
}

fn run(cli: Cli) -> Result<u8, CliError> {
    configure_threads()?;
    match cli.command {
        Command::Check(a) => commands::check(&a),
        Command::Zeta(a) => commands::zeta(&a).map(|_| 0),
        Command::Spectra(a) => commands::spectra(&a).map(|_| 0),
        Command::Limit(a) => commands::limit(&a).map(|_| 0),
        Command::Faces(a) => commands::faces(&a).map(|_| 0),
        Command::Matrix(a) => commands::matrix(&a).map(|_| 0),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(code) => ExitCode::from(code),
        Err(CliError::Usage(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
        Err(CliError::Numerical(msg)) => {
            eprintln!("numerical failure: {msg}");
            ExitCode::from(3)
        }
    }
}
