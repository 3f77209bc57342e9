//! `qwm`: runs quantum-walk-with-memory experiments and writes their data.
//!
//! Exit codes: 0 success, 1 I/O failure, 2 invalid spec or arguments,
//! 3 coin-shift/partition constraint violation, 4 failed numerical check.

mod commands;
mod config;
mod error;
mod output;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use crate::error::CliError;

#[derive(Parser)]
#[command(name = "qwm", version, about = "Quantum walks with memory on regular graphs")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run one experiment spec, once per seed.
    Simulate(Common),
    /// Run walk classes over a list of seeds and compare them.
    Sweep(Common),
    /// Cross-check the engine against the walks written in their own bases.
    Equivalence(Common),
    /// Count partitions, coin shifts and distinct dicycle walks.
    Enumerate {
        #[command(flatten)]
        common: Common,
        /// Base cycle size of the enumeration host.
        #[arg(long, default_value_t = 3)]
        window: usize,
    },
}

#[derive(Args, Clone, Debug)]
pub struct Common {
    /// Experiment spec (TOML, or JSON with a `.json` extension).
    #[arg(long)]
    config: Option<PathBuf>,
    /// Output directory.
    #[arg(long)]
    out: PathBuf,
    /// Seeds such as `0..20`, `0..=19` or `1,4,9`.
    #[arg(long, value_parser = config::parse_seed_list)]
    seeds: Option<config::SeedList>,
    /// Horizon override.
    #[arg(long)]
    t_max: Option<usize>,
    /// Worker threads for per-seed jobs (default: all cores).
    #[arg(long)]
    workers: Option<usize>,
}

impl Common {
    fn seeds(&self) -> Option<Vec<u64>> {
        self.seeds.as_ref().map(|s| s.0.clone())
    }

    fn pool(&self) -> Result<rayon::ThreadPool, CliError> {
        let mut builder = rayon::ThreadPoolBuilder::new();
        if let Some(n) = self.workers {
            if n == 0 {
                return Err(CliError::Spec("--workers must be at least 1".into()));
            }
            builder = builder.num_threads(n);
        }
        builder.build().map_err(|e| CliError::Io(e.to_string()))
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match &cli.command {
        Command::Simulate(args) => commands::simulate::run(args),
        Command::Sweep(args) => commands::sweep::run(args),
        Command::Equivalence(args) => commands::equivalence::run(args),
        Command::Enumerate { common, window } => commands::enumerate::run(common, *window),
    };
    match result {
        Ok(summary) => {
            println!("{summary}");
            ExitCode::SUCCESS
        }
        Err(e) => {
            eprintln!("qwm: {e}");
            e.exit_code()
        }
    }
}
