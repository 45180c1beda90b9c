//! The `dpkit` command-line tool: CSV in, JSON report out.
//!
//! Exit codes: 0 success, 2 bad flags, 3 data, bounds or contract failure,
//! 4 privacy budget exhausted. Reports go to stdout and diagnostics to
//! stderr.

mod args;
mod commands;
mod io;
mod report;

use std::ffi::OsString;
use std::io::Write;

use clap::Parser;

pub use args::Cli;
pub use report::RunReport;

use crate::DpError;

/// Exit status for a successful command.
pub const EXIT_OK: i32 = 0;
/// Unknown or inconsistent flags.
pub const EXIT_USAGE: i32 = 2;
/// Unreadable input, bounds violations and other contract failures.
pub const EXIT_DATA: i32 = 3;
/// A `--ledger` cap would be exceeded.
pub const EXIT_BUDGET: i32 = 4;

#[derive(Debug)]
pub(crate) enum CliError {
    Usage(String),
    Data(String),
    Dp(DpError),
}

impl From<DpError> for CliError {
    fn from(e: DpError) -> Self {
        CliError::Dp(e)
    }
}

impl CliError {
    fn exit_code(&self) -> i32 {
        match self {
            CliError::Usage(_) => EXIT_USAGE,
            CliError::Data(_) => EXIT_DATA,
            CliError::Dp(DpError::BudgetExhausted { .. }) => EXIT_BUDGET,
            CliError::Dp(DpError::InvalidBudget(_)) => EXIT_USAGE,
            CliError::Dp(_) => EXIT_DATA,
        }
    }
}

impl std::fmt::Display for CliError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            CliError::Usage(m) | CliError::Data(m) => f.write_str(m),
            CliError::Dp(e) => write!(f, "{e}"),
        }
    }
}

pub(crate) type CliResult<T> = std::result::Result<T, CliError>;

/// Runs the tool on a full argument vector (program name first) and returns
/// the process exit code.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
        }
    };
    match commands::execute(cli) {
        Ok(report) => {
            let mut out = std::io::stdout().lock();
            // A closed pipe downstream is not a failure of the run.
            let _ = writeln!(out, "{}", report.to_json());
            EXIT_OK
        }
        Err(e) => {
            eprintln!("dpkit: {e}");
            e.exit_code()
        }
    }
}
