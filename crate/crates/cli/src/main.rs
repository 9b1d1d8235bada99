use clap::{Parser, Subcommand};
use serde::de::DeserializeOwned;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

mod commands;
mod config;

use commands::{CliError, Ctx};

/// Random Gaussian RBM states: entanglement numerics and replica free-energy models.
#[derive(Debug, Parser)]
#[command(name = "rbment", version, about)]
struct Cli {
    #[command(subcommand)]
    command: Command,

    /// JSON configuration file for the subcommand.
    #[arg(long, global = true)]
    config: Option<PathBuf>,

    /// Output directory; each subcommand writes into its own subdirectory.
    #[arg(long, global = true, default_value = "out")]
    out: PathBuf,

    /// Overrides the configuration's seed.
    #[arg(long, global = true)]
    seed: Option<u64>,

    /// Worker threads (default: all cores).
    #[arg(long, global = true)]
    threads: Option<usize>,

    /// Overwrite existing outputs.
    #[arg(long, global = true)]
    force: bool,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Order parameters and Rényi-2 estimates over a (u, v, λ) grid.
    PhaseDiagram,
    /// Analytic and/or sampled Page curves.
    PageCurve,
    /// Mean entanglement spectrum with the Marchenko–Pastur reference.
    Spectrum,
    /// Level-spacing ratios in one spin-flip sector.
    LevelStats,
    /// Fractal dimensions, analytic and sampled.
    Fractal,
    /// State-design obstruction checks.
    DesignCheck,
    /// Norm-fluctuation statistic over N and λ.
    NormFluct,
}

fn load<T: DeserializeOwned>(path: &Path) -> Result<T, CliError> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| CliError::Config(format!("cannot read {}: {e}", path.display())))?;
    serde_json::from_str(&text).map_err(|e| CliError::Config(format!("{}: {e}", path.display())))
}

fn run(cli: Cli) -> Result<Vec<PathBuf>, CliError> {
    if let Some(t) = cli.threads {
        if t == 0 {
            return Err(CliError::Config("--threads must be positive".into()));
        }
        rayon::ThreadPoolBuilder::new()
            .num_threads(t)
            .build_global()
            .map_err(|e| CliError::Config(e.to_string()))?;
    }
    let path = cli
        .config
        .clone()
        .ok_or_else(|| CliError::Config("--config PATH is required".into()))?;
    let ctx = |name: &str| Ctx::new(cli.out.join(name), cli.force, cli.seed);
    match cli.command {
        Command::PhaseDiagram => {
            let c = load(&path)?;
            commands::phase::run(&ctx("phase-diagram")?, c)
        }
        Command::PageCurve => {
            let c = load(&path)?;
            commands::page::run(&ctx("page-curve")?, c)
        }
        Command::Spectrum => {
            let c = load(&path)?;
            commands::spectrum::run(&ctx("spectrum")?, c)
        }
        Command::LevelStats => {
            let c = load(&path)?;
            commands::levels::run(&ctx("level-stats")?, c)
        }
        Command::Fractal => {
            let c = load(&path)?;
            commands::fractal::run(&ctx("fractal")?, c)
        }
        Command::DesignCheck => {
            let c = load(&path)?;
            commands::design::run(&ctx("design-check")?, c)
        }
        Command::NormFluct => {
            let c = load(&path)?;
            commands::norm::run(&ctx("norm-fluct")?, c)
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(files) => {
            for f in files {
                println!("{}", f.display());
            }
            ExitCode::SUCCESS
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
