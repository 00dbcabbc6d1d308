//! Experiment runner behind the `ctlab` binary: configuration, commands,
//! run records and their CSV/JSON serialisation.

pub mod commands;
pub mod config;
pub mod output;
pub mod record;

pub use commands::{run, RunError};
pub use config::{Command, ConfigError, Format, Number, RunConfig};
pub use record::{RunRecord, Verdict};

/// Environment variable selecting the worker-thread count.
pub const THREADS_ENV: &str = "CTLAB_THREADS";
