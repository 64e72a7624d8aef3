//! Command-line front end: argument parsing, dispatch and JSON reports.

pub mod commands;
pub mod expr;
pub mod output;

use std::ffi::OsString;

use clap::Parser;

pub use commands::{Cli, Command};
pub use output::CliReport;

/// Exit code when every check passes (bound-only checks included).
pub const EXIT_PASS: i32 = 0;
/// Exit code when some check fails.
pub const EXIT_FAIL: i32 = 1;
/// Exit code for usage, parse and input errors.
pub const EXIT_USAGE: i32 = 2;

/// Parses `args`, runs the command, prints the JSON report to standard output
/// and a summary to standard error, and returns the exit code.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_PASS };
            let _ = e.print();
            return code;
        }
    };
    let report = commands::execute(&cli.command);
    println!("{}", report.to_json());
    eprint!("{}", report.summary());
    report.exit_code
}
