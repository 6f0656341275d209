mod commands;
mod config;
mod output;

use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::Result;
use cii_core::Sex;
use clap::{Args, Parser, Subcommand};

use config::{Overrides, RunConfig};

/// Lung-cancer critical illness insurance: transition rates, cohort
/// projections, simulation checks and contract valuation.
#[derive(Parser)]
#[command(
    name = "cii",
    version,
    after_help = "Environment: CII_DATA_DIR sets the default data directory."
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Write q_ij(s) for ages 20..=100 for one or both sexes.
    Rates(Common),
    /// Write the occupancy trajectory, increment-decrement table and matrices.
    Project(Common),
    /// Monte Carlo occupancy compared with the analytic trajectory.
    Simulate {
        #[command(flatten)]
        common: Common,
        #[arg(long)]
        paths: Option<u64>,
        #[arg(long)]
        seed: Option<u64>,
    },
    /// Value the contract referenced by the config.
    Price(Common),
}

#[derive(Args)]
struct Common {
    /// JSON run configuration.
    #[arg(long)]
    config: Option<PathBuf>,
    #[arg(long)]
    sex: Option<Sex>,
    /// Entry age x.
    #[arg(long)]
    age: Option<u32>,
    /// Term n in years.
    #[arg(long)]
    term: Option<u32>,
    /// Output directory.
    #[arg(long)]
    out: Option<PathBuf>,
}

impl Common {
    fn overrides(&self) -> Overrides {
        Overrides {
            sex: self.sex,
            entry_age: self.age,
            term: self.term,
            out: self.out.clone(),
            ..Overrides::default()
        }
    }
}

fn run(cli: Cli) -> Result<()> {
    let (common, overrides) = match &cli.command {
        Command::Rates(c) | Command::Project(c) | Command::Price(c) => (c, c.overrides()),
        Command::Simulate {
            common,
            paths,
            seed,
        } => {
            let mut o = common.overrides();
            o.paths = *paths;
            o.seed = *seed;
            (common, o)
        }
    };
    let cfg = RunConfig::resolve(common.config.as_deref(), &overrides)?;
    let staged = match cli.command {
        Command::Rates(_) => commands::rates(&cfg)?,
        Command::Project(_) => commands::project(&cfg)?,
        Command::Simulate { .. } => commands::simulate(&cfg)?,
        Command::Price(_) => commands::price(&cfg)?,
    };
    for path in staged.commit()? {
        println!("{}", path.display());
    }
    Ok(())
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::FAILURE
        }
    }
}
