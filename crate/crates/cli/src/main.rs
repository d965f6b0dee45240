mod args;
mod commands;

use std::io::Write;
use std::process::ExitCode;

use anyhow::{Context, Result};
use clap::Parser;

use args::{Cli, Command};
use commands::{Output, UsageError};

fn run(cli: Cli) -> Result<bool> {
    let (g, command) = args::merge(cli)?;
    if let Some(t) = g.threads {
        rayon::ThreadPoolBuilder::new().num_threads(t).build_global().context("thread pool")?;
    }
    let Output { csv, ok } = match command {
        Command::Sweep(a) => commands::sweep(&g, a)?,
        Command::Kernel(a) => commands::kernel(&g, a)?,
        Command::Oracle(a) => commands::oracle(&g, a)?,
        Command::Pareto(a) => commands::pareto(a)?,
        Command::Net(a) => commands::net(&g, a)?,
    };
    match &g.out {
        Some(p) => std::fs::write(p, &csv).with_context(|| format!("writing {}", p.display()))?,
        None => std::io::stdout().write_all(&csv)?,
    }
    Ok(ok)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::FAILURE,
        Err(e) if e.is::<UsageError>() => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::FAILURE
        }
    }
}
