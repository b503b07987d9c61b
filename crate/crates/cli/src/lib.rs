//! Command-line driver: CSV ingestion, the `nullform` subcommands and
//! their JSON or tabular reports.
//!
//! Exit codes: 0 success, 2 usage error, 3 data error, 4 numeric error.

pub mod commands;
pub mod dataset;
pub mod error;
pub mod report;

pub use commands::run_command;
pub use dataset::{ingest_csv, CsvOptions, Dataset};
pub use error::CliError;
pub use report::AnalysisReport;
