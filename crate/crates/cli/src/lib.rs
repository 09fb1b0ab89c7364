//! Library half of the `rwkit` command-line tool: configuration, file
//! formats, synthetic data and experiment reports.

pub mod commands;
pub mod config;
pub mod dataset;
pub mod error;
pub mod eval;
pub mod signal_io;

pub use commands::{run, Command};
pub use config::ExperimentConfig;
pub use error::{CliError, CliResult};

/// Thread cap from `RWKIT_THREADS`; `None` when unset.
pub fn thread_cap() -> CliResult<Option<usize>> {
    match std::env::var("RWKIT_THREADS") {
        Err(_) => Ok(None),
        Ok(v) => match v.trim().parse::<usize>() {
            Ok(n) if n >= 1 => Ok(Some(n)),
            _ => Err(CliError::config("RWKIT_THREADS", format!("must be a positive integer, got {v:?}"))),
        },
    }
}
