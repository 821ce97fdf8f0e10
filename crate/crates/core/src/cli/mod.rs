// Copyright 2026 The relatherm Authors
// SPDX-License-Identifier: Apache-2.0

//! Scenario runner behind the `relatherm` binary.
//!
//! `relatherm run <config.toml> [--output DIR] [--seed N] [--threads N]`
//! writes `<name>.csv` and `<name>.summary.txt`.

pub mod config;
pub mod output;
pub mod scenarios;

use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand};
use sha2::{Digest, Sha256};

use crate::error::Error;

pub use config::{ScenarioConfig, ScenarioKind};
pub use output::{Dataset, Summary};

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("config error: {0}")]
    Config(String),
    #[error("{context}: {source}")]
    Library { context: String, source: Error },
    #[error("i/o error: {0}")]
    Io(String),
}

impl CliError {
    pub(crate) fn config(field: &str, msg: &str) -> Self {
        CliError::Config(format!("{field}: {msg}"))
    }

    /// 2 for configuration problems, 3 for numerical failures, 4 for a
    /// non-unique stationary state, 1 for i/o.
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Config(_) => 2,
            CliError::Io(_) => 1,
            CliError::Library { source, .. } => match source {
                Error::DegenerateNullSpace(_) => 4,
                Error::Domain(_)
                | Error::DimensionMismatch { .. }
                | Error::InvalidMatrix(_)
                | Error::MissingEpsilon
                | Error::ClusteringAmbiguity(_)
                | Error::InsufficientDimension { .. } => 2,
                _ => 3,
            },
        }
    }
}

#[derive(Debug, Clone, Default, PartialEq)]
pub struct RunOptions {
    pub output_dir: Option<PathBuf>,
    pub seed: Option<u64>,
    /// Worker threads for sweeps; 0 or `None` lets rayon decide.
    pub threads: Option<usize>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct RunResult {
    pub scenario: ScenarioKind,
    pub name: String,
    pub dataset: Dataset,
    pub summary: Summary,
}

impl RunResult {
    pub fn csv(&self) -> Result<String, CliError> {
        self.dataset.to_csv()
    }
}

pub fn config_hash(text: &str) -> String {
    hex::encode(Sha256::digest(text.as_bytes()))
}

/// Runs a scenario from configuration text without touching the filesystem.
pub fn run_config(text: &str, opts: &RunOptions) -> Result<RunResult, CliError> {
    let cfg = ScenarioConfig::parse(text)?;
    let seed = opts.seed.or(cfg.seed).unwrap_or(0);
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(opts.threads.unwrap_or(0))
        .build()
        .map_err(|e| CliError::Io(e.to_string()))?;
    let (mut dataset, mut summary) = pool.install(|| match cfg.scenario {
        ScenarioKind::Spectrum => scenarios::spectrum(&cfg),
        ScenarioKind::QubitHeat => scenarios::qubit_heat(&cfg),
        ScenarioKind::EntropyProduction => scenarios::entropy_production(&cfg),
        ScenarioKind::TotalEntropy => scenarios::total_entropy(&cfg),
        ScenarioKind::Evolve => scenarios::evolve_scenario(&cfg, seed),
        ScenarioKind::Stationary => scenarios::stationary(&cfg, seed),
        ScenarioKind::KmsCheck => scenarios::kms_check(&cfg),
    })?;
    let hash = config_hash(text);
    let mut meta = vec![
        ("relatherm".to_string(), env!("CARGO_PKG_VERSION").to_string()),
        ("scenario".to_string(), cfg.scenario.name().to_string()),
        ("config_sha256".to_string(), hash.clone()),
        ("seed".to_string(), seed.to_string()),
    ];
    meta.append(&mut dataset.metadata);
    dataset.metadata = meta;
    let mut head = Summary::default();
    head.set("scenario", cfg.scenario.name());
    head.set("config_sha256", hash);
    head.set("seed", seed);
    head.set("rows", dataset.rows.len());
    head.entries.append(&mut summary.entries);
    let name = cfg.output.name.clone().unwrap_or_else(|| cfg.scenario.name().to_string());
    Ok(RunResult { scenario: cfg.scenario, name, dataset, summary: head })
}

/// Runs a configuration file and writes the dataset and summary.
pub fn run_file(path: &Path, opts: &RunOptions) -> Result<(RunResult, PathBuf, PathBuf), CliError> {
    let text = std::fs::read_to_string(path).map_err(|e| CliError::Config(format!("{}: {e}", path.display())))?;
    let result = run_config(&text, opts)?;
    let cfg_dir = ScenarioConfig::parse(&text)?.output.dir.map(PathBuf::from);
    let dir = opts.output_dir.clone().or(cfg_dir).unwrap_or_else(|| PathBuf::from("."));
    let csv = output::write_file(&dir, &format!("{}.csv", result.name), &result.csv()?)?;
    let summary = output::write_file(&dir, &format!("{}.summary.txt", result.name), &result.summary.render())?;
    Ok((result, csv, summary))
}

#[derive(Debug, Parser)]
#[command(name = "relatherm", version, about = "Moving-probe thermal bath simulations")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Run the scenario described by a TOML configuration file.
    Run {
        config: PathBuf,
        /// Output directory; overrides `output.dir` in the config.
        #[arg(long)]
        output: Option<PathBuf>,
        /// Seed for randomly generated systems.
        #[arg(long)]
        seed: Option<u64>,
        /// Worker threads for parameter sweeps.
        #[arg(long, env = "RELATHERM_THREADS")]
        threads: Option<usize>,
    },
}

/// Entry point of the binary; returns the process exit code.
pub fn main_with_args<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { 2 } else { 0 };
        }
    };
    match cli.command {
        Command::Run { config, output, seed, threads } => {
            let opts = RunOptions { output_dir: output, seed, threads };
            match run_file(&config, &opts) {
                Ok((result, csv, summary)) => {
                    println!("{}: {} rows -> {}", result.scenario.name(), result.dataset.rows.len(), csv.display());
                    println!("summary -> {}", summary.display());
                    0
                }
                Err(e) => {
                    eprintln!("error: {e}");
                    e.exit_code()
                }
            }
        }
    }
}
