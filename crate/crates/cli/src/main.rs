//! `aaspectra`: spectral sequence encoding and ensemble model training.

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use serde::Serialize;

use aaspectra::dataset::Task;
use aaspectra::encoding::ResiduePolicy;
use aaspectra::evaluation::PrimaryMetric;

use aaspectra_cli::commands;

#[derive(Parser)]
#[command(name = "aaspectra", version, about = "Spectral sequence encoding and ensemble training")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Filter an AAIndex1 file and derive per-group amino-acid descriptors
    Descriptors(DescriptorsCmd),
    /// Encode sequences into FFT magnitude features
    Encode(EncodeCmd),
    /// Train, select, and assemble an ensemble bundle
    Train(TrainCmd),
    /// Predict sequences with a saved bundle
    Predict(PredictCmd),
    /// Score a saved bundle against a labeled dataset
    Evaluate(EvaluateCmd),
    /// Generate the synthetic demo corpus and datasets
    Gendata(GendataCmd),
}

#[derive(Args)]
struct DescriptorsCmd {
    /// AAIndex1 flat file
    #[arg(long)]
    aaindex: PathBuf,
    /// KS significance level (0.01, 0.05, or 0.10)
    #[arg(long, default_value_t = 0.05)]
    alpha: f64,
    #[arg(long, default_value_t = 42)]
    seed: u64,
    /// Also run the k-means diagnostic with this many clusters
    #[arg(long)]
    cluster_k: Option<usize>,
    /// Output descriptor table (JSON)
    #[arg(long, default_value = "descriptors.json")]
    out: PathBuf,
}

#[derive(Args)]
struct EncodeCmd {
    /// Precomputed descriptor table (JSON)
    #[arg(long, conflicts_with = "aaindex")]
    descriptors: Option<PathBuf>,
    /// AAIndex1 flat file (descriptors derived on the fly)
    #[arg(long)]
    aaindex: Option<PathBuf>,
    #[arg(long, default_value_t = 0.05)]
    alpha: f64,
    /// Input CSV with a sequence column
    #[arg(long)]
    dataset: PathBuf,
    #[arg(long, default_value = "sequence")]
    seq_col: String,
    /// What to do with non-canonical residues: error, skip, or mean
    #[arg(long, default_value = "error")]
    residue_policy: String,
    /// Power-of-two pad length (default: derived from the longest sequence)
    #[arg(long)]
    pad: Option<usize>,
    /// Output feature CSV
    #[arg(long, default_value = "features.csv")]
    out: PathBuf,
}

#[derive(Args)]
struct TrainCmd {
    #[arg(long, conflicts_with = "aaindex")]
    descriptors: Option<PathBuf>,
    #[arg(long)]
    aaindex: Option<PathBuf>,
    #[arg(long)]
    dataset: PathBuf,
    /// classification or regression
    #[arg(long)]
    task: String,
    #[arg(long, default_value = "sequence")]
    seq_col: String,
    #[arg(long, default_value = "target")]
    target_col: String,
    #[arg(long, default_value_t = 42)]
    seed: u64,
    #[arg(long, default_value_t = 5)]
    k_folds: usize,
    #[arg(long, default_value_t = 0.2)]
    test_fraction: f64,
    #[arg(long, default_value_t = 0.05)]
    alpha: f64,
    #[arg(long, default_value = "error")]
    residue_policy: String,
    /// accuracy | f1 | pearson | spearman | r2 | rmse (default per task)
    #[arg(long)]
    primary_metric: Option<String>,
    /// Worker threads (0 = all cores)
    #[arg(long, default_value_t = 0)]
    jobs: usize,
    /// Cap on model specs per task, sampled evenly from the grid
    #[arg(long)]
    max_models: Option<usize>,
    /// Output ensemble bundle (JSON)
    #[arg(long, default_value = "bundle.json")]
    out: PathBuf,
}

#[derive(Args)]
struct PredictCmd {
    /// Saved ensemble bundle (JSON)
    #[arg(long)]
    model: PathBuf,
    #[arg(long)]
    dataset: PathBuf,
    #[arg(long, default_value = "sequence")]
    seq_col: String,
    /// Output prediction CSV
    #[arg(long, default_value = "predictions.csv")]
    out: PathBuf,
}

#[derive(Args)]
struct EvaluateCmd {
    #[arg(long)]
    model: PathBuf,
    #[arg(long)]
    dataset: PathBuf,
    #[arg(long, default_value = "sequence")]
    seq_col: String,
    #[arg(long, default_value = "target")]
    target_col: String,
}

#[derive(Args)]
struct GendataCmd {
    #[arg(long, default_value = "demo-data")]
    out_dir: PathBuf,
    #[arg(long, default_value_t = 7)]
    seed: u64,
    /// Rows per generated dataset
    #[arg(long, default_value_t = 152)]
    rows: usize,
}

fn emit<T: Serialize>(report: &T) -> aaspectra::Result<()> {
    println!("{}", serde_json::to_string_pretty(report)?);
    Ok(())
}

fn run(cli: Cli) -> aaspectra::Result<()> {
    match cli.command {
        Command::Descriptors(cmd) => {
            let report = commands::run_descriptors(&commands::DescriptorsArgs {
                aaindex: cmd.aaindex,
                alpha: cmd.alpha,
                seed: cmd.seed,
                cluster_k: cmd.cluster_k,
                out: cmd.out,
            })?;
            emit(&report)
        }
        Command::Encode(cmd) => {
            let report = commands::run_encode(&commands::EncodeArgs {
                descriptors: cmd.descriptors,
                aaindex: cmd.aaindex,
                alpha: cmd.alpha,
                dataset: cmd.dataset,
                seq_col: cmd.seq_col,
                residue_policy: cmd.residue_policy.parse::<ResiduePolicy>()?,
                pad: cmd.pad,
                out: cmd.out,
            })?;
            emit(&report)
        }
        Command::Train(cmd) => {
            let report = commands::run_train(&commands::TrainArgs {
                descriptors: cmd.descriptors,
                aaindex: cmd.aaindex,
                dataset: cmd.dataset,
                task: cmd.task.parse::<Task>()?,
                seq_col: cmd.seq_col,
                target_col: cmd.target_col,
                seed: cmd.seed,
                k_folds: cmd.k_folds,
                test_fraction: cmd.test_fraction,
                alpha: cmd.alpha,
                residue_policy: cmd.residue_policy.parse::<ResiduePolicy>()?,
                primary_metric: cmd
                    .primary_metric
                    .map(|m| m.parse::<PrimaryMetric>())
                    .transpose()?,
                jobs: cmd.jobs,
                max_models: cmd.max_models,
                out: cmd.out,
            })?;
            emit(&report)
        }
        Command::Predict(cmd) => {
            let report = commands::run_predict(&commands::PredictArgs {
                model: cmd.model,
                dataset: cmd.dataset,
                seq_col: cmd.seq_col,
                out: cmd.out,
            })?;
            emit(&report)
        }
        Command::Evaluate(cmd) => {
            let report = commands::run_evaluate(&commands::EvaluateArgs {
                model: cmd.model,
                dataset: cmd.dataset,
                seq_col: cmd.seq_col,
                target_col: cmd.target_col,
            })?;
            emit(&report)
        }
        Command::Gendata(cmd) => {
            let report = commands::run_gendata(&commands::GendataArgs {
                out_dir: cmd.out_dir,
                seed: cmd.seed,
                rows: cmd.rows,
            })?;
            emit(&report)
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {}", e);
            ExitCode::FAILURE
        }
    }
}
