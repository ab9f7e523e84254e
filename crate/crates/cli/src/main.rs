//! Batch command-line front end for the recognition pipeline.
//!
//! Subcommands: `train`, `eval`, `predict`, `inspect`, `gen`. Every
//! paper-underspecified knob (grid size, normalization factor, detector
//! thresholds, hidden width, optimizer settings) surfaces as a flag with the
//! library default, so parameter sweeps are plain shell loops. All commands
//! are deterministic given their flags and seed.

mod commands;

use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};

use akshar_core::classifier::TrainConfig;
use akshar_core::pipeline::PipelineConfig;

#[derive(Parser)]
#[command(name = "akshar", version, about = "Handwritten character recognition pipeline")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Train a classifier and write the model file.
    Train(TrainArgs),
    /// Evaluate a model on a dataset.
    Eval(EvalArgs),
    /// Classify one image.
    Predict(PredictArgs),
    /// Dump every preprocessing stage and the feature vector for one image.
    Inspect(InspectArgs),
    /// Write a synthetic dataset to disk.
    Gen(GenArgs),
}

fn parse_grid(s: &str) -> Result<usize, String> {
    let n: usize = s.parse().map_err(|_| format!("invalid number {s:?}"))?;
    if (2..=5).contains(&n) {
        Ok(n)
    } else {
        Err(format!("unsupported grid: n = {n} (expected 2, 3, 4 or 5)"))
    }
}

fn parse_positive(s: &str) -> Result<f64, String> {
    let v: f64 = s.parse().map_err(|_| format!("invalid number {s:?}"))?;
    if v > 0.0 {
        Ok(v)
    } else {
        Err(format!("must be positive, got {v}"))
    }
}

/// Pipeline knobs shared by every command that touches images or models.
#[derive(Args, Clone)]
struct PipelineArgs {
    /// Segment grid side (2..=5)
    #[arg(long, default_value_t = 4, value_parser = parse_grid)]
    grid: usize,
    /// Per-segment gc normalization factor
    #[arg(long, default_value_t = 40.0, value_parser = parse_positive)]
    norm_factor: f64,
    /// Binarization threshold for grayscale inputs
    #[arg(long, default_value_t = 128)]
    threshold: u8,
    /// Headline run fraction for the Full category
    #[arg(long, default_value_t = 0.80)]
    shiro_full: f64,
    /// Headline run fraction for the Partial category
    #[arg(long, default_value_t = 0.35)]
    shiro_partial: f64,
    /// Minimum vertical run fraction for a spine
    #[arg(long, default_value_t = 0.60)]
    spine_run: f64,
    /// Column fraction where a spine counts as End
    #[arg(long, default_value_t = 0.75)]
    spine_end_zone: f64,
    /// Intersection count divisor
    #[arg(long, default_value_t = 10.0)]
    intersection_divisor: f64,
    /// Hidden layer width (0 = twice the feature length)
    #[arg(long, default_value_t = 0)]
    hidden: usize,
    /// Training iteration cap
    #[arg(long, default_value_t = 500)]
    max_iters: usize,
    /// Gradient norm stopping tolerance
    #[arg(long, default_value_t = 1e-6, value_parser = parse_positive)]
    grad_tol: f64,
    /// Forced restart period (0 = parameter count)
    #[arg(long, default_value_t = 0)]
    restart_every: usize,
    /// Line-search bracket tolerance
    #[arg(long, default_value_t = 1e-6, value_parser = parse_positive)]
    ls_tol: f64,
    /// Line-search evaluation budget
    #[arg(long, default_value_t = 48)]
    ls_evals: usize,
    /// Seed for generation, splitting and weight initialization
    #[arg(long, default_value_t = 0)]
    seed: u64,
}

impl PipelineArgs {
    fn to_config(&self) -> PipelineConfig {
        let mut cfg = PipelineConfig {
            grid_n: self.grid,
            binarize_threshold: self.threshold,
            n_hidden: self.hidden,
            ..PipelineConfig::default()
        };
        cfg.features.norm_factor = self.norm_factor;
        cfg.features.intersection_divisor = self.intersection_divisor;
        cfg.features.shirorekha_full = self.shiro_full;
        cfg.features.shirorekha_partial = self.shiro_partial;
        cfg.features.spine_min_run = self.spine_run;
        cfg.features.spine_end_zone = self.spine_end_zone;
        cfg.train = TrainConfig {
            max_iters: self.max_iters,
            grad_tol: self.grad_tol,
            restart_every: self.restart_every,
            line_search_tol: self.ls_tol,
            line_search_max_evals: self.ls_evals,
            seed: self.seed,
        };
        cfg
    }
}

/// Where samples come from: a directory-per-class tree or the synthetic
/// generator.
#[derive(Args, Clone)]
struct DataArgs {
    /// Dataset root with one subdirectory per class
    #[arg(long, conflicts_with = "synthetic")]
    root: Option<PathBuf>,
    /// Generate the synthetic corpus instead of loading from disk
    #[arg(long)]
    synthetic: bool,
    /// Synthetic class count
    #[arg(long, default_value_t = 25)]
    classes: usize,
    /// Synthetic samples per class
    #[arg(long, default_value_t = 40)]
    per_class: usize,
    /// Per-class training sample count for the split
    #[arg(long, default_value_t = 30)]
    train_per_class: usize,
    /// Per-class test sample count for the split
    #[arg(long, default_value_t = 10)]
    test_per_class: usize,
}

#[derive(Args)]
struct TrainArgs {
    #[command(flatten)]
    data: DataArgs,
    /// Model output path
    #[arg(long)]
    out: PathBuf,
    /// Also write the class-name table, one name per line
    #[arg(long)]
    names_out: Option<PathBuf>,
    /// Also write the metrics report to this file
    #[arg(long)]
    report: Option<PathBuf>,
    #[command(flatten)]
    pipeline: PipelineArgs,
}

#[derive(Args)]
struct EvalArgs {
    /// Trained model path
    #[arg(long)]
    model: PathBuf,
    #[command(flatten)]
    data: DataArgs,
    /// Which side of the split to evaluate
    #[arg(long, value_parser = ["train", "test", "all"], default_value = "all")]
    split: String,
    /// Write the confusion matrix as CSV
    #[arg(long)]
    confusion: Option<PathBuf>,
    #[command(flatten)]
    pipeline: PipelineArgs,
}

#[derive(Args)]
struct PredictArgs {
    /// Trained model path
    #[arg(long)]
    model: PathBuf,
    /// PBM or PGM image to classify
    image: PathBuf,
    /// Class-name table, one name per line
    #[arg(long)]
    names: Option<PathBuf>,
    #[command(flatten)]
    pipeline: PipelineArgs,
}

#[derive(Args)]
struct InspectArgs {
    /// PBM or PGM image to trace through the pipeline
    image: PathBuf,
    /// Directory for the stage files
    #[arg(long)]
    out_dir: PathBuf,
    /// Additionally dump the raster after every thinning pass
    #[arg(long)]
    passes: bool,
    #[command(flatten)]
    pipeline: PipelineArgs,
}

#[derive(Args)]
struct GenArgs {
    /// Directory for the dataset tree
    #[arg(long)]
    out_dir: PathBuf,
    /// Class count
    #[arg(long, default_value_t = 25)]
    classes: usize,
    /// Samples per class
    #[arg(long, default_value_t = 40)]
    per_class: usize,
    /// Generator seed
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Also write the source_id,class_index,class_name manifest
    #[arg(long)]
    manifest: Option<PathBuf>,
}

fn main() {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Train(args) => commands::train(args),
        Command::Eval(args) => commands::eval(args),
        Command::Predict(args) => commands::predict(args),
        Command::Inspect(args) => commands::inspect(args),
        Command::Gen(args) => commands::gen(args),
    };
    if let Err(err) = result {
        eprintln!("error: {err:#}");
        std::process::exit(1);
    }
}
