//! One module per subcommand. Each exposes a typed computation and a
//! function that turns its result into a [`CsvReport`].

pub mod conjecture;
pub mod example2;
pub mod factors;
pub mod figure5;
pub mod records;
pub mod validate;

use crate::error::CliError;
use crate::report::CsvReport;

/// A finished command: the CSV to write, and a failure to report after
/// writing it (validation failures still produce their report).
#[derive(Debug, Clone, PartialEq)]
pub struct Outcome {
    pub report: CsvReport,
    pub failure: Option<CliError>,
}

impl Outcome {
    pub fn ok(report: CsvReport) -> Self {
        Outcome { report, failure: None }
    }

    pub fn exit_code(&self) -> i32 {
        self.failure.as_ref().map_or(0, CliError::exit_code)
    }
}
