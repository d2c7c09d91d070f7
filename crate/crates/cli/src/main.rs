//! `singlet`: tables, power curves, gap analyses and oracle checks as CSV.
//!
//! Exit status is 0 on success, 1 on a usage error and 2 when `verify`
//! finds a failing check.

mod args;
mod commands;
mod format;

use std::process::ExitCode;

use clap::Parser;

use args::{Cli, Command};
use commands::Failure;

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 1 } else { 0 });
        }
    };
    let result = match &cli.command {
        Command::Tables(a) => commands::tables(a),
        Command::Power(a) => commands::power(a),
        Command::Gaps(a) => commands::gaps(a),
        Command::Verify(a) => commands::verify(a),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Usage(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(1)
        }
        Err(Failure::Verification(n)) => {
            eprintln!("verification failed: {n} check(s) out of tolerance");
            ExitCode::from(2)
        }
        Err(Failure::Other(e)) => {
            eprintln!("error: {e:#}");
            ExitCode::from(1)
        }
    }
}
