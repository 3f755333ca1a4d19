//! `active-cover`: run, sweep and analyse active covering experiments.

mod commands;
mod config;
mod output;

use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::{Context, Result};
use clap::{Args, Parser, Subcommand};

use active_cover::distributions::Preset;
use active_cover::learners::LearnerKind;

use config::{ExperimentConfig, MRule, Overrides, SigmaRule};

#[derive(Parser)]
#[command(name = "active-cover", version, about = "Active covering simulator")]
struct Cli {
    /// Worker threads (0 = one per hardware thread).
    #[arg(long, global = true, env = "ACTIVE_COVER_THREADS")]
    threads: Option<usize>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run trials for each learner and pool size; write per-trial results.
    Run {
        #[command(flatten)]
        exp: ExperimentArgs,
        /// Also write one query log per trial under OUT/logs.
        #[arg(long)]
        emit_query_logs: bool,
    },
    /// Run a grid of pool sizes; write sweep, rate-fit and comparison tables.
    Sweep {
        #[command(flatten)]
        exp: ExperimentArgs,
    },
    /// Sample a dataset and write it as CSV (with an in_support column).
    GenData {
        #[arg(long)]
        config: Option<PathBuf>,
        #[arg(long)]
        preset: Option<Preset>,
        #[arg(long)]
        dim: Option<usize>,
        #[arg(long)]
        p: Option<f64>,
        #[arg(long)]
        n: Option<usize>,
        #[arg(long)]
        seed: Option<u64>,
        /// Output file.
        #[arg(long)]
        out: PathBuf,
    },
    /// Fit power-law rates to an existing sweep CSV.
    FitRate {
        /// Sweep CSV to read.
        sweep_csv: PathBuf,
        /// Directory for rate_fit.csv.
        #[arg(long, default_value = ".")]
        out: PathBuf,
    },
}

#[derive(Args)]
struct ExperimentArgs {
    /// JSON experiment config; flags override its fields.
    #[arg(long)]
    config: Option<PathBuf>,
    /// Learner kind (repeatable); replaces the configured learner list.
    #[arg(long = "learner")]
    learners: Vec<LearnerKind>,
    /// Pool size (repeatable).
    #[arg(long = "n")]
    n: Vec<usize>,
    #[arg(long)]
    dim: Option<usize>,
    #[arg(long)]
    p: Option<f64>,
    #[arg(long)]
    preset: Option<Preset>,
    /// Pool CSV to use instead of sampling.
    #[arg(long)]
    data: Option<PathBuf>,
    /// Initial sample size: an integer or `recommended`.
    #[arg(long)]
    m: Option<MRule>,
    /// UCB width: a number or `auto` (2 (ln n)^(1/D)).
    #[arg(long)]
    sigma: Option<SigmaRule>,
    #[arg(long)]
    trials: Option<usize>,
    /// Base seed; trial i uses mix64(seed, i).
    #[arg(long)]
    seed: Option<u64>,
    /// `all` or `budget:K`.
    #[arg(long)]
    stop: Option<String>,
    /// Number of recall checkpoints.
    #[arg(long)]
    checkpoints: Option<usize>,
    /// Output directory.
    #[arg(long)]
    out: Option<PathBuf>,
}

impl ExperimentArgs {
    fn resolve(self) -> Result<ExperimentConfig> {
        let o = Overrides {
            preset: self.preset,
            data: self.data,
            learners: self.learners,
            n: self.n,
            dim: self.dim,
            p: self.p,
            m: self.m,
            sigma: self.sigma,
            trials: self.trials,
            seed: self.seed,
            stop: self.stop,
            checkpoints: self.checkpoints,
            out: self.out,
        };
        ExperimentConfig::resolve(self.config.as_deref(), o)
    }
}

fn execute(cli: Cli) -> Result<()> {
    if let Some(threads) = cli.threads {
        rayon::ThreadPoolBuilder::new()
            .num_threads(threads)
            .build_global()
            .context("cannot configure thread pool")?;
    }
    match cli.command {
        Command::Run {
            exp,
            emit_query_logs,
        } => commands::run(&exp.resolve()?, emit_query_logs),
        Command::Sweep { exp } => commands::sweep(&exp.resolve()?),
        Command::GenData {
            config,
            preset,
            dim,
            p,
            n,
            seed,
            out,
        } => {
            let o = Overrides {
                preset,
                dim,
                p,
                n: n.into_iter().collect(),
                seed,
                ..Default::default()
            };
            commands::gen_data(&ExperimentConfig::resolve(config.as_deref(), o)?, &out)
        }
        Command::FitRate { sweep_csv, out } => commands::fit_rate(&sweep_csv, &out),
    }
}

fn main() -> ExitCode {
    match execute(Cli::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::FAILURE
        }
    }
}
