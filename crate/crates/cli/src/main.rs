use std::process::ExitCode;

use clap::Parser;
use symtest_cli::cli::Cli;

fn main() -> ExitCode {
    let cli = Cli::parse();
    match symtest_cli::run(&cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::FAILURE
        }
    }
}
