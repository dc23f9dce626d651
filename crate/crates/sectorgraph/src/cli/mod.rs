//! Command-line front end: `generate`, `theory`, `experiment`, `report`.
//!
//! Exit codes are a stable contract: 0 success, 1 experiment criteria failed
//! (the report is still written), 2 config/usage error, 3 I/O error.

mod commands;
mod config;
mod presets;

pub use commands::{cmd_experiment, cmd_generate, cmd_report, cmd_theory};
pub use config::{parse_angle, parse_s_value};
pub use presets::{preset, preset_names, ExperimentSpec};

use clap::{Parser, Subcommand};
use std::path::PathBuf;

pub const TOOL_VERSION: &str = env!("CARGO_PKG_VERSION");

#[derive(Debug, Parser)]
#[command(
    name = "sectorgraph",
    version,
    about = "Random sector digraph laboratory"
)]
pub struct Cli {
    /// Worker threads for parallel sections (0 or absent = library default).
    #[arg(long, global = true)]
    pub threads: Option<usize>,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Sample a marked cloud, build the digraph, write CSVs and a manifest.
    Generate {
        #[arg(long)]
        config: PathBuf,
        #[arg(long, default_value = "out")]
        out: PathBuf,
        /// Overrides the seed in the config file.
        #[arg(long)]
        seed: Option<u64>,
    },
    /// Evaluate limit formulas as JSON records.
    Theory {
        #[arg(long)]
        config: PathBuf,
        /// Also write the records to `<out>/theory.json`.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Run a replicate experiment from a config file or a named preset.
    Experiment {
        #[arg(long, conflicts_with = "preset")]
        config: Option<PathBuf>,
        #[arg(long)]
        preset: Option<String>,
        #[arg(long, default_value = "out")]
        out: PathBuf,
        #[arg(long)]
        seed: Option<u64>,
    },
    /// Merge experiment reports into one summary (CSV + text).
    Report {
        #[arg(long, default_value = "out")]
        out: PathBuf,
        /// Report JSON files to merge.
        #[arg(required = true)]
        inputs: Vec<PathBuf>,
    },
}

/// Run a parsed invocation; returns the process exit code.
pub fn run(cli: Cli) -> i32 {
    if let Some(threads) = cli.threads {
        crate::par::configure_threads(threads);
    }
    let outcome = match cli.command {
        Command::Generate { config, out, seed } => cmd_generate(&config, &out, seed),
        Command::Theory { config, out } => cmd_theory(&config, out.as_deref()),
        Command::Experiment {
            config,
            preset,
            out,
            seed,
        } => cmd_experiment(config.as_deref(), preset.as_deref(), &out, seed),
        Command::Report { out, inputs } => cmd_report(&inputs, &out),
    };
    match outcome {
        Ok(code) => code,
        Err(err) => {
            eprintln!("error: {err}");
            match err {
                crate::Error::Io(_) => 3,
                _ => 2,
            }
        }
    }
}
