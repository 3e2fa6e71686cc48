//! Command-line harness around `econe-core`.
//!
//! Exit codes: 0 success, 2 validation failure, 3 budget exceeded, 4 bad
//! arguments, 1 I/O errors.

pub mod args;
pub mod cache;
pub mod commands;
pub mod config;
pub mod logging;
pub mod suites;

use std::ffi::OsString;

use econe_core::Error as CoreError;

pub const EXIT_OK: i32 = 0;
pub const EXIT_IO: i32 = 1;
pub const EXIT_VALIDATION: i32 = 2;
pub const EXIT_BUDGET: i32 = 3;
pub const EXIT_BAD_ARGS: i32 = 4;

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("{0}")]
    BadArgs(String),
    #[error(transparent)]
    Core(#[from] CoreError),
    #[error(transparent)]
    Io(#[from] std::io::Error),
    #[error(transparent)]
    Json(#[from] serde_json::Error),
    #[error(transparent)]
    Csv(#[from] csv::Error),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::BadArgs(_) => EXIT_BAD_ARGS,
            CliError::Core(CoreError::BudgetExceeded { .. }) => EXIT_BUDGET,
            CliError::Core(
                CoreError::InvalidPartition(_)
                | CoreError::SizeMismatch { .. }
                | CoreError::InvalidField(_)
                | CoreError::UnsupportedField(_)
                | CoreError::InvalidArgument(_)
                | CoreError::DuplicateSample(_)
                | CoreError::InsufficientSamples { .. }
                | CoreError::Parse(_),
            ) => EXIT_BAD_ARGS,
            CliError::Core(_) => EXIT_VALIDATION,
            CliError::Io(_) | CliError::Json(_) | CliError::Csv(_) => EXIT_IO,
        }
    }
}

/// Parses `argv` and runs the command, returning the process exit code.
pub fn run<I, T>(argv: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    use clap::Parser;
    let cli = match args::Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { EXIT_BAD_ARGS } else { EXIT_OK };
        }
    };
    let log = logging::Logger::new(!cli.global.quiet);
    match args::execute(&cli, &log) {
        Ok(true) => EXIT_OK,
        Ok(false) => EXIT_VALIDATION,
        Err(e) => {
            log.event("error", serde_json::json!({ "message": e.to_string(), "exit_code": e.exit_code() }));
            eprintln!("error: {e}");
            e.exit_code()
        }
    }
}
