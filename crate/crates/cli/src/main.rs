use std::process::ExitCode;

use clap::Parser;

fn main() -> ExitCode {
    let cli = schottky_cli::Cli::parse();
    ExitCode::from(schottky_cli::run(&cli))
}
