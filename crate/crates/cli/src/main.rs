//! `nitm`: command-line front end for the non-iterative solvers.
//!
//! Exit codes: 0 success, 1 usage error, 2 numerical failure.

mod args;
mod commands;
mod config;
mod output;

use std::process::ExitCode;

use clap::error::ErrorKind;
use clap::{CommandFactory, Parser};
use nitm_core::Variant;

use crate::args::{Cli, Command};
use crate::config::RunConfig;

#[derive(Debug)]
pub enum CliError {
    Usage(String),
    Numerical(String),
}

fn run(cli: &Cli) -> Result<(), CliError> {
    let cfg = RunConfig::resolve(&cli.common)?;
    let common = &cli.common;
    match &cli.command {
        Command::Blasius => commands::blasius(common, &cfg),
        Command::Sweep(a) => commands::sweep_cmd(a, common, &cfg),
        Command::MovingWall(a) => commands::single(Variant::MovingWall, a, common, &cfg),
        Command::Slip(a) => commands::single(Variant::Slip, a, common, &cfg),
        Command::Gasification(a) => commands::single(Variant::Gasification, a, common, &cfg),
        Command::CriticalB(a) => commands::critical_b(a, &cfg),
        Command::Target(a) => commands::target(a, common, &cfg),
        Command::SeriesCheck(a) => commands::series(a, common, &cfg),
        Command::Rubel(a) => commands::rubel(a, &cfg),
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            if matches!(e.kind(), ErrorKind::DisplayHelp | ErrorKind::DisplayVersion) {
                let _ = e.print();
                return ExitCode::SUCCESS;
            }
            let text = e.render().to_string();
            eprint!("{text}");
            if !text.contains("Usage:") {
                eprintln!("\n{}", Cli::command().render_usage());
            }
            return ExitCode::from(1);
        }
    };
    match run(&cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(CliError::Usage(msg)) => {
            eprintln!("error: {msg}\n\n{}", Cli::command().render_usage());
            ExitCode::from(1)
        }
        Err(CliError::Numerical(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
    }
}
