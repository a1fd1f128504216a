//! Library half of the `symtest` command-line tool.

pub mod cli;
pub mod commands;
pub mod csv_io;

use std::io::Write;

use anyhow::{Context, Result};

use cli::{Cli, Command};

/// Environment variable capping the number of worker threads.
pub const THREADS_ENV: &str = "SYMTEST_THREADS";

fn render(command: &Command) -> Result<String> {
    match command {
        Command::Test(args) => commands::cmd_test(args),
        Command::Study(args) => commands::cmd_study(args),
        Command::Oracle(args) => commands::cmd_oracle(args),
    }
}

fn destination(command: &Command) -> Option<&std::path::Path> {
    match command {
        Command::Test(a) => a.output.out.as_deref(),
        Command::Study(a) => a.output.out.as_deref(),
        Command::Oracle(a) => a.out.as_deref(),
    }
}

/// Runs a parsed command line, honouring `SYMTEST_THREADS`.
pub fn run(cli: &Cli) -> Result<()> {
    let threads = match std::env::var(THREADS_ENV) {
        Ok(v) => Some(
            v.trim()
                .parse::<usize>()
                .ok()
                .filter(|&n| n > 0)
                .with_context(|| format!("{THREADS_ENV} must be a positive integer, got {v:?}"))?,
        ),
        Err(_) => None,
    };
    let text = match threads {
        Some(n) => rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build()?
            .install(|| render(&cli.command))?,
        None => render(&cli.command)?,
    };
    match destination(&cli.command) {
        Some(path) => std::fs::write(path, text).with_context(|| format!("writing {}", path.display()))?,
        None => std::io::stdout().lock().write_all(text.as_bytes())?,
    }
    Ok(())
}
