use std::process::ExitCode;

use clap::Parser;

fn main() -> ExitCode {
    heatgrad::cli::run(heatgrad::cli::Cli::parse())
}
