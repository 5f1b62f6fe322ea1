//! Experiment runner: configuration, the experiment registry and reporting.

pub mod config;
pub mod experiments;
pub mod report;

use std::path::PathBuf;

pub use config::{resolve, ExperimentConfig, Params};
pub use experiments::{find, registry, Experiment};
pub use report::{Metric, Outcome, Row};

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("invalid configuration: {0}")]
    Config(String),
    #[error("numerical failure: {0}")]
    Numerical(#[from] chaoslab_core::Error),
    #[error("i/o error: {0}")]
    Io(#[from] std::io::Error),
    #[error("cannot write output: {0}")]
    Output(String),
}

/// Process exit codes.
pub mod exit {
    /// Every metric passed.
    pub const OK: i32 = 0;
    /// The run finished but at least one metric failed.
    pub const CHECK_FAILED: i32 = 1;
    /// Bad configuration or command line.
    pub const CONFIG: i32 = 2;
    /// Numerical or output failure during the run.
    pub const FAILURE: i32 = 3;
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Config(_) => exit::CONFIG,
            CliError::Numerical(_) | CliError::Io(_) | CliError::Output(_) => exit::FAILURE,
        }
    }
}

/// Run an experiment on its own thread pool. Results do not depend on the
/// pool size.
pub fn execute(config: &ExperimentConfig) -> Result<Outcome, CliError> {
    let exp = find(&config.experiment).ok_or_else(|| CliError::Config(format!("unknown experiment `{}`", config.experiment)))?;
    let mut builder = rayon::ThreadPoolBuilder::new();
    if let Some(w) = config.workers {
        builder = builder.num_threads(w);
    }
    let pool = builder.build().map_err(|e| CliError::Config(format!("thread pool: {e}")))?;
    Ok(pool.install(|| (exp.run)(&config.params, config.seed))?)
}

/// Run and write `results.csv` and `summary.json`; returns the outcome and
/// the output directory.
pub fn run_and_write(config: &ExperimentConfig) -> Result<(Outcome, PathBuf), CliError> {
    let outcome = execute(config)?;
    let dir = config.out_dir();
    outcome.write(config, &dir)?;
    Ok((outcome, dir))
}
