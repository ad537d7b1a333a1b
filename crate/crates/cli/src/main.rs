use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};

mod commands;
mod config;
mod error;
mod output;

use config::Config;
use error::{CliError, Result};

#[derive(Debug, Parser)]
#[command(name = "fracspec", version, about = "Spectral fractional derivatives on the real line")]
struct Cli {
    /// TOML configuration file.
    #[arg(long, global = true)]
    config: Option<PathBuf>,

    /// Output directory.
    #[arg(long, global = true, default_value = "out")]
    out: PathBuf,

    /// Number of equispaced α values in [0, 1].
    #[arg(long, global = true)]
    alpha_grid: Option<usize>,

    /// Worker threads (default: all cores).
    #[arg(long, global = true)]
    threads: Option<usize>,

    /// Lift the desk-scale resource limits.
    #[arg(long, global = true)]
    full_scale: bool,

    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Apply the fractional operator to a function or sample file.
    Fracdiff,
    /// Write error tables and rate curves for the bundled test functions.
    Validate,
    /// Evolve the non-local KdV-Burgers equation.
    Solve,
    /// Inspect, build or delete cached operators.
    Cache {
        #[arg(value_enum)]
        action: CacheAction,
    },
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum CacheAction {
    List,
    Build,
    Purge,
}

/// Settings shared by every command.
pub struct Context {
    pub config: Config,
    pub out: PathBuf,
    pub alpha_grid: Option<usize>,
    pub full_scale: bool,
}

fn run(cli: Cli) -> Result<()> {
    if let Some(threads) = cli.threads {
        if threads == 0 {
            return Err(CliError::Config("--threads must be >= 1".into()));
        }
        rayon::ThreadPoolBuilder::new()
            .num_threads(threads)
            .build_global()
            .map_err(|e| CliError::Config(format!("thread pool: {e}")))?;
    }
    let ctx = Context {
        config: Config::load(cli.config.as_deref())?,
        out: cli.out,
        alpha_grid: cli.alpha_grid,
        full_scale: cli.full_scale,
    };
    match cli.command {
        Command::Fracdiff => commands::fracdiff::run(&ctx),
        Command::Validate => commands::validate::run(&ctx),
        Command::Solve => commands::solve::run(&ctx),
        Command::Cache { action } => match action {
            CacheAction::List => commands::cache::list(&ctx),
            CacheAction::Build => commands::cache::build(&ctx),
            CacheAction::Purge => commands::cache::purge(&ctx),
        },
    }
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("fracspec: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
