//! `mrsband` command-line tool.

mod args;
mod commands;
mod config;

use std::fmt;
use std::process::ExitCode;
use std::time::Instant;

use clap::Parser;

use args::{Cli, Command};
use config::RunConfig;

/// Bad flags or flag values; exits with status 1.
#[derive(Debug)]
pub struct UsageError(pub String);

impl fmt::Display for UsageError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

impl std::error::Error for UsageError {}

const EXIT_USAGE: u8 = 1;
const EXIT_DATA: u8 = 2;
const EXIT_NUMERIC: u8 = 3;

fn exit_code(err: &anyhow::Error) -> u8 {
    for cause in err.chain() {
        if cause.downcast_ref::<UsageError>().is_some() {
            return EXIT_USAGE;
        }
        if let Some(e) = cause.downcast_ref::<mrsband_core::Error>() {
            return if e.is_numeric() {
                EXIT_NUMERIC
            } else {
                EXIT_DATA
            };
        }
    }
    EXIT_DATA
}

fn run(cli: Cli) -> anyhow::Result<()> {
    let rc = RunConfig::resolve(&cli.global)?;
    if let Some(jobs) = rc.jobs {
        rayon::ThreadPoolBuilder::new()
            .num_threads(jobs)
            .build_global()?;
    }
    match cli.command {
        Command::Synth { synth, output } => commands::synth(&synth, output, &rc),
        Command::Dim(pair) => commands::dim(&pair, &rc),
        Command::Energy(pair) => commands::energy(&pair, &rc),
        Command::Select(pair) => commands::select(&pair, &rc),
        Command::Train {
            pair,
            percent,
            hidden,
            epochs,
        } => commands::train(&pair, percent, hidden, epochs, &rc),
        Command::Suite {
            data,
            pairs,
            reference_pairs,
        } => commands::suite(&data, pairs.as_deref(), reference_pairs, &rc),
        Command::Trend { suite } => commands::trend(suite, &rc),
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() {
                ExitCode::from(EXIT_USAGE)
            } else {
                ExitCode::SUCCESS
            };
        }
    };
    let start = Instant::now();
    match run(cli) {
        Ok(()) => {
            eprintln!("done in {:.2} s", start.elapsed().as_secs_f64());
            ExitCode::SUCCESS
        }
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(exit_code(&e))
        }
    }
}
