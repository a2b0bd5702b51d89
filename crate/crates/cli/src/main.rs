//! `matchrank`: synthesize or ingest probability models, rank candidates,
//! and evaluate rankings against sampled ground truth.

mod commands;
mod config;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use serde::{Deserialize, Serialize};

use matchrank_core::Error;

#[derive(Debug, Parser)]
#[command(name = "matchrank", version, about = "Rank candidates to fill slots with relevant ones")]
struct Cli {
    /// Worker threads; defaults to one per core. Output does not depend on it.
    #[arg(long, global = true)]
    threads: Option<usize>,

    /// JSON object of option values, keyed by option name in snake_case.
    #[arg(long, global = true)]
    config: Option<PathBuf>,

    /// More log output (-v info, -vv debug).
    #[arg(short, long, action = clap::ArgAction::Count, global = true)]
    verbose: u8,

    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Generate a group-structured synthetic model.
    Synth(SynthOpts),
    /// Build an independent model from a candidate-by-label probability file.
    Ingest(IngestOpts),
    /// Dump Monte-Carlo relevance samples as triplet files.
    Sample(SampleOpts),
    /// Rank the candidates of a model.
    Rank(RankOpts),
    /// Evaluate a ranking on ground-truth draws from a model.
    Eval(EvalOpts),
    /// Tabulate evaluation reports.
    Report(ReportOpts),
}

#[derive(Debug, Args, Serialize, Deserialize)]
pub struct SynthOpts {
    /// Output model file.
    #[arg(long)]
    pub out: Option<PathBuf>,
    #[arg(long)]
    pub groups: Option<usize>,
    #[arg(long)]
    pub slots_per_group: Option<usize>,
    #[arg(long)]
    pub candidates: Option<usize>,
    /// Groups each candidate belongs to.
    #[arg(long)]
    pub memberships: Option<usize>,
    #[arg(long)]
    pub p_base: Option<f64>,
    #[arg(long)]
    pub seed: Option<u64>,
}

#[derive(Debug, Args, Serialize, Deserialize)]
pub struct IngestOpts {
    /// Candidate-by-label probability triplet file.
    #[arg(long)]
    pub input: Option<PathBuf>,
    /// Slots per label: one count for all labels, or one per label ("5,10,3").
    #[arg(long)]
    pub slots_per_label: Option<String>,
    /// Clamp every probability to at most this value.
    #[arg(long)]
    pub max_clip: Option<f64>,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args, Serialize, Deserialize)]
pub struct SampleOpts {
    #[arg(long)]
    pub model: Option<PathBuf>,
    #[arg(long)]
    pub n_samples: Option<usize>,
    #[arg(long)]
    pub sample_seed: Option<u64>,
    /// Directory receiving one triplet file per sample.
    #[arg(long)]
    pub out_dir: Option<PathBuf>,
}

#[derive(Debug, Args, Serialize, Deserialize)]
pub struct RankOpts {
    #[arg(long)]
    pub model: Option<PathBuf>,
    /// matchrank, matchrank-lazy, and, or, tr, ntr or random.
    #[arg(long)]
    pub algorithm: Option<String>,
    /// Monte-Carlo samples (default 200).
    #[arg(long)]
    pub n_samples: Option<usize>,
    #[arg(long)]
    pub sample_seed: Option<u64>,
    /// Seed of the random baseline.
    #[arg(long)]
    pub seed: Option<u64>,
    /// Rank only the top k candidates.
    #[arg(long)]
    pub stop_at: Option<usize>,
    /// Score baselines on the model's marginals instead of sample estimates.
    #[arg(long)]
    pub from_model_marginals: bool,
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// Also write the average matching size per prefix as CSV.
    #[arg(long)]
    pub curve: Option<PathBuf>,
}

#[derive(Debug, Args, Serialize, Deserialize)]
pub struct EvalOpts {
    #[arg(long)]
    pub model: Option<PathBuf>,
    #[arg(long)]
    pub ranking: Option<PathBuf>,
    /// Ground-truth draws (default 100).
    #[arg(long)]
    pub draws: Option<usize>,
    #[arg(long)]
    pub eval_seed: Option<u64>,
    /// Report label; defaults to the algorithm name.
    #[arg(long)]
    pub label: Option<String>,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args, Serialize, Deserialize)]
pub struct ReportOpts {
    /// Evaluation report files.
    pub reports: Vec<PathBuf>,
    /// Also write the table as CSV.
    #[arg(long)]
    pub csv: Option<PathBuf>,
}

/// An error with the process exit code it maps to.
#[derive(Debug)]
pub struct Failure {
    pub code: u8,
    pub message: String,
}

impl Failure {
    pub fn usage(message: impl Into<String>) -> Self {
        Self {
            code: 1,
            message: message.into(),
        }
    }

    pub fn data(message: impl Into<String>) -> Self {
        Self {
            code: 2,
            message: message.into(),
        }
    }
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let code = match e {
            Error::Input(_) | Error::Parse { .. } | Error::Io(_) | Error::Json(_) => 2,
            Error::Contract(_) | Error::Invariant(_) => 3,
        };
        Self {
            code,
            message: e.to_string(),
        }
    }
}

/// Unwraps a required option.
pub fn require<T>(value: Option<T>, name: &str) -> Result<T, Failure> {
    value.ok_or_else(|| Failure::usage(format!("missing --{}", name.replace('_', "-"))))
}

fn run(cli: Cli) -> Result<(), Failure> {
    if let Some(n) = cli.threads {
        rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build_global()
            .map_err(|e| Failure::usage(format!("--threads: {e}")))?;
    }
    let config = match &cli.config {
        Some(path) => config::load(path)?,
        None => Default::default(),
    };
    match cli.command {
        Command::Synth(o) => commands::synth(config::merge(&o, &config)?),
        Command::Ingest(o) => commands::ingest(config::merge(&o, &config)?),
        Command::Sample(o) => commands::sample(config::merge(&o, &config)?),
        Command::Rank(o) => commands::rank(config::merge(&o, &config)?),
        Command::Eval(o) => commands::eval(config::merge(&o, &config)?),
        Command::Report(o) => commands::report(config::merge(&o, &config)?),
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 1 } else { 0 });
        }
    };
    let level = match cli.verbose {
        0 => log::LevelFilter::Warn,
        1 => log::LevelFilter::Info,
        _ => log::LevelFilter::Debug,
    };
    env_logger::Builder::new().filter_level(level).init();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => {
            eprintln!("error: {}", f.message);
            ExitCode::from(f.code)
        }
    }
}
