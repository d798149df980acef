//! `cosserat-plate`: command-line front end for the plate library.

mod commands;
mod config;
mod output;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use crate::commands::Flags;
use crate::config::RunConfig;

#[derive(Debug)]
pub enum CliError {
    /// Bad input: exit code 2.
    Config(String),
    /// Solver or I/O failure: exit code 1.
    Runtime(String),
}

impl From<cosserat_plate::Error> for CliError {
    fn from(e: cosserat_plate::Error) -> Self {
        if e.is_config() {
            CliError::Config(e.to_string())
        } else {
            CliError::Runtime(e.to_string())
        }
    }
}

#[derive(Parser)]
#[command(name = "cosserat-plate", version, about = "Thin Cosserat plate statics, dynamics and dispersion")]
struct Cli {
    #[command(subcommand)]
    command: Command,
    /// JSON run configuration.
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    /// Output directory.
    #[arg(long, global = true, default_value = "out")]
    out: PathBuf,
    /// Seed for the randomized verification suites.
    #[arg(long, global = true, default_value_t = 1)]
    seed: u64,
    /// Worker thread cap.
    #[arg(long, global = true)]
    threads: Option<usize>,
    /// Use the printed coefficient tables (dispersion) or list their differences (verify).
    #[arg(long = "paper-literal-operators", global = true)]
    literal: bool,
}

#[derive(Subcommand, Clone, Copy)]
enum Command {
    /// Material admissibility report.
    Validate,
    /// Technical constants, inertia and coefficient tables.
    Constants,
    /// Static solve and snapshot.
    Static,
    /// Time integration with energy log.
    Simulate,
    /// Dispersion curves and cutoff frequencies.
    Dispersion,
    /// All verification suites; nonzero exit if any fails.
    Verify,
    /// Cutoffs and branch frequencies over a grid of N, l_t, l_b and Ψ.
    Sweep,
}

fn run(cli: &Cli) -> Result<bool, CliError> {
    if let Some(n) = cli.threads {
        if n == 0 {
            return Err(CliError::Config("--threads must be at least 1".into()));
        }
        rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build_global()
            .map_err(|e| CliError::Runtime(format!("thread pool: {e}")))?;
    }
    let flags = Flags { out: &cli.out, seed: cli.seed, literal: cli.literal };
    if let Command::Verify = cli.command {
        return commands::verify(&flags);
    }
    let path = cli
        .config
        .as_ref()
        .ok_or_else(|| CliError::Config("this subcommand needs --config <path>".into()))?;
    let cfg = RunConfig::load(path)?;
    match cli.command {
        Command::Validate => commands::validate(&cfg, &flags),
        Command::Constants => commands::constants_cmd(&cfg, &flags),
        Command::Static => commands::static_cmd(&cfg, &flags),
        Command::Simulate => commands::simulate(&cfg, &flags),
        Command::Dispersion => commands::dispersion(&cfg, &flags),
        Command::Sweep => commands::sweep(&cfg, &flags),
        Command::Verify => unreachable!("handled above"),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(CliError::Config(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
        Err(CliError::Runtime(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(1)
        }
    }
}
