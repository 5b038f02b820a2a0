//! Command-line front end for the generalized-Bessel operator checks.
//!
//! Three subcommands: `eval` prints `φ_{κ,c}(z)` next to any matching
//! closed form, `verify` runs implication and identity checks over a
//! parameter sweep, and `audit` samples an admissibility boundary set.
//! Exit codes: 0 when everything passes, 1 on a verification failure,
//! 2 on usage, configuration or domain errors.

pub mod args;
pub mod commands;
pub mod config;
pub mod report;

use std::fmt;

pub use args::Cli;
pub use config::RunConfig;

/// Environment variable capping the worker thread count.
pub const THREADS_ENV: &str = "BESSEL_SUBORD_THREADS";

#[derive(Debug)]
pub enum CliError {
    Usage(String),
    Config(String),
    Core(bessel_subord_core::Error),
    Io(std::io::Error),
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CliError::Usage(msg) => write!(f, "usage error: {msg}"),
            CliError::Config(msg) => write!(f, "config error: {msg}"),
            CliError::Core(e) => write!(f, "{e}"),
            CliError::Io(e) => write!(f, "io error: {e}"),
        }
    }
}

impl std::error::Error for CliError {}

impl From<bessel_subord_core::Error> for CliError {
    fn from(e: bessel_subord_core::Error) -> Self {
        CliError::Core(e)
    }
}

impl From<std::io::Error> for CliError {
    fn from(e: std::io::Error) -> Self {
        CliError::Io(e)
    }
}

/// Result of a completed run.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Outcome {
    Pass,
    Fail,
}

impl Outcome {
    pub fn from_pass(pass: bool) -> Self {
        if pass {
            Outcome::Pass
        } else {
            Outcome::Fail
        }
    }

    pub fn exit_code(self) -> i32 {
        match self {
            Outcome::Pass => 0,
            Outcome::Fail => 1,
        }
    }
}

/// Exit code for errors that stop a run.
pub const ERROR_EXIT: i32 = 2;

/// Runs a parsed command line on a pool sized by [`THREADS_ENV`].
pub fn run(cli: &Cli) -> Result<Outcome, CliError> {
    let pool = thread_pool()?;
    pool.install(|| commands::dispatch(cli))
}

fn thread_pool() -> Result<rayon::ThreadPool, CliError> {
    let mut builder = rayon::ThreadPoolBuilder::new();
    if let Ok(value) = std::env::var(THREADS_ENV) {
        let n: usize = value
            .trim()
            .parse()
            .ok()
            .filter(|&n| n > 0)
            .ok_or_else(|| CliError::Usage(format!("{THREADS_ENV} must be a positive integer, got {value:?}")))?;
        builder = builder.num_threads(n);
    }
    builder.build().map_err(|e| CliError::Usage(e.to_string()))
}
