//! `f1mirror`: command-line front-end for the F1 mirror computations.
//!
//! Exit status: 0 when every check passes, 1 on a mathematical mismatch,
//! 2 on usage or I/O errors.

mod commands;
mod config;
mod svg;

use std::io::Write;
use std::process::ExitCode;

use clap::Parser;

use config::Cli;

const MISMATCH: u8 = 1;
const USAGE: u8 = 2;

fn main() -> ExitCode {
    // clap exits with status 2 on parse errors
    let cli = Cli::parse();
    let report = match commands::run(&cli.command, &cli.config) {
        Ok(r) => r,
        Err(e) => {
            eprintln!("error: {e:#}");
            return ExitCode::from(USAGE);
        }
    };
    let written = match &cli.config.out {
        Some(path) => {
            std::fs::write(path, &report.output).map_err(|e| format!("{}: {e}", path.display()))
        }
        None => std::io::stdout()
            .lock()
            .write_all(report.output.as_bytes())
            .map_err(|e| e.to_string()),
    };
    if let Err(e) = written {
        eprintln!("error: {e}");
        return ExitCode::from(USAGE);
    }
    for note in &report.notes {
        eprintln!("{note}");
    }
    if report.passed {
        ExitCode::SUCCESS
    } else {
        ExitCode::from(MISMATCH)
    }
}
