//! `dualmon`: writes the data behind each plot of the JJ + QPS circuit study
//! as CSV or JSON, with gnuplot scripts next to the CSVs.

#![allow(clippy::neg_cmp_op_on_partial_ord)]

mod commands;
mod config;
mod output;

use std::process::ExitCode;

use clap::Parser;

use config::{Cli, RunConfig};

/// Failure classes, each with its own exit code.
#[derive(Debug)]
pub enum Failure {
    Config(String),
    Convergence(String),
    Other(anyhow::Error),
}

impl Failure {
    fn code(&self) -> u8 {
        match self {
            Failure::Config(_) => 2,
            Failure::Convergence(_) => 3,
            Failure::Other(_) => 1,
        }
    }
}

impl std::fmt::Display for Failure {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Failure::Config(m) => write!(f, "config error: {m}"),
            Failure::Convergence(m) => write!(f, "convergence failure: {m}"),
            Failure::Other(e) => write!(f, "{e:#}"),
        }
    }
}

impl From<dualmon::Error> for Failure {
    fn from(e: dualmon::Error) -> Self {
        use dualmon::Error as E;
        match e {
            E::Config(m) => Failure::Config(m),
            E::InvalidParameter(_) | E::InvalidInput(_) | E::UnsupportedBand(_) => Failure::Config(e.to_string()),
            E::Convergence(_) | E::NonUniqueSteadyState { .. } => Failure::Convergence(e.to_string()),
            other => Failure::Other(other.into()),
        }
    }
}

impl From<std::io::Error> for Failure {
    fn from(e: std::io::Error) -> Self {
        Failure::Other(e.into())
    }
}

fn run(cli: Cli) -> Result<(), Failure> {
    let config = RunConfig::from_cli(cli)?;
    if let Some(t) = config.threads {
        rayon::ThreadPoolBuilder::new()
            .num_threads(t)
            .build_global()
            .map_err(|e| Failure::Other(e.into()))?;
    }
    commands::dispatch(&config)
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) if !e.use_stderr() => e.exit(),
        Err(e) => {
            let text = e.to_string();
            let line = text.lines().next().unwrap_or("invalid arguments");
            eprintln!("dualmon: {}", line.trim_start_matches("error: "));
            return ExitCode::from(2);
        }
    };
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => {
            let line = f.to_string().replace('\n', " ");
            eprintln!("dualmon: {line}");
            ExitCode::from(f.code())
        }
    }
}
