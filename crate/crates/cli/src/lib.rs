//! Command-line driver for `mellin-core`: file formats, the verification
//! battery and machine-readable reports.

pub mod commands;
pub mod error;
pub mod files;
pub mod report;
pub mod suites;

use std::io::Write;

use clap::Parser;

use crate::commands::{echo, execute, Cli};
use crate::error::CliError;

/// Parses `args` (program name first), runs the command, prints the text
/// report to `out` and diagnostics to `err`, and returns the exit code.
pub fn run(args: &[String], out: &mut impl Write, err: &mut impl Write) -> i32 {
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = e.exit_code();
            let text = e.render().to_string();
            if code == 0 {
                let _ = write!(out, "{text}");
            } else {
                let _ = write!(err, "{text}");
            }
            return code;
        }
    };
    let report = match execute(&cli.command, echo(args)) {
        Ok(r) => r,
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            return 2;
        }
    };
    if let Some(path) = &cli.command.common().json {
        if let Err(source) = std::fs::write(path, report.to_json()) {
            let _ = writeln!(err, "error: {}", CliError::Write { path: path.clone(), source });
            return 2;
        }
    }
    let _ = write!(out, "{}", report.to_text());
    report.exit_code()
}
