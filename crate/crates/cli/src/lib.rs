//! Experiments behind the `stein-md` command line tool: tail-ratio curves
//! for records and binomial counts, Stein-factor scans, and bound-validity
//! sweeps. Every command produces a [`report::CsvReport`].

pub mod commands;
pub mod error;
pub mod grid;
pub mod report;

pub use commands::Outcome;
pub use error::{CliError, CliResult};

/// Seed used when `--seed` is not given.
pub const DEFAULT_SEED: u64 = 20_240_601;
