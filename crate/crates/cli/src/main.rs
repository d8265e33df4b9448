//! `taxolint` command-line front end.
//!
//! Exit status: 0 when clean, 1 when the linter reports violations, 2 on any
//! operational error.

mod args;
mod commands;
mod output;

use std::process::ExitCode;

use clap::Parser;

use args::{Cli, Command};

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match &cli.command {
        Command::Stats(a) => commands::stats(a),
        Command::Lint(a) => commands::lint(a),
        Command::Analyze(a) => commands::analyze(a),
        Command::Reduce(a) => commands::reduce(a),
        Command::Levels(a) => commands::levels(a),
    };
    match result {
        Ok(status) => ExitCode::from(status as u8),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(commands::Status::Error as u8)
        }
    }
}
