//! Command-line harness for the `orbit-bergman` laboratory: configuration,
//! dispatch, result records and the acceptance suite.

pub mod config;
pub mod emit;
pub mod run;
pub mod verify;

pub use config::{Command, ConfigError, Format, Level, RunConfig};
pub use emit::{ResultRecord, emit_results, read_record, render};
pub use run::{CliError, run_experiment};
pub use verify::{CriterionResult, VerifySummary, verify_suite};
