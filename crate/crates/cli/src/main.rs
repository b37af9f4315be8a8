use std::process::ExitCode;

use clap::Parser;

mod commands;
mod config;
mod error;
mod report;
mod setup;

use config::{Cli, RunConfig};

fn main() -> ExitCode {
    let cli = Cli::parse();
    let outcome = RunConfig::from_cli(cli).and_then(|cfg| {
        let outcome = commands::run(&cfg)?;
        outcome.emit(&cfg)?;
        Ok(outcome.exit_code)
    });
    match outcome {
        Ok(code) => ExitCode::from(code as u8),
        Err(e) => {
            eprintln!("fusion-limits: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
