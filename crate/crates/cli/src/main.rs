//! `satd`: find self-admitted technical debt in code comments.

mod commands;
mod inputs;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

#[derive(Parser)]
#[command(name = "satd", version, about = "Identify self-admitted technical debt in source code comments")]
struct Cli {
    /// Worker threads; 1 runs everything sequentially.
    #[arg(long, global = true, value_parser = clap::value_parser!(u16).range(1..))]
    parallelism: Option<u16>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Convert the benchmark's parallel comments/labels files into corpus files.
    Import(ImportArgs),
    /// Extract and filter comments from a source tree into a corpus file.
    Scan(ScanArgs),
    /// Label every comment of a corpus.
    Classify(ClassifyArgs),
    /// Train a voting text-mining model, one sub-model per corpus.
    Train(TrainArgs),
    /// Score classifiers on labeled corpora under a cross-project scenario.
    Evaluate(EvaluateArgs),
    /// Compare scores against published results, and prediction sets against each other.
    Compare(CompareArgs),
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum ClassifierKind {
    Mat,
    MatStrict,
    MatFuzzy,
    MatExt,
    Pattern,
    Tm,
    #[value(name = "tm+mat")]
    TmMat,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum StrategyArg {
    Strict,
    Fuzzy,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum ScenarioArg {
    Mto,
    Oto,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum FormatArg {
    Json,
    Text,
    Csv,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum WeightingArg {
    TfIdf,
    Counts,
}

#[derive(Args)]
struct ImportArgs {
    /// One comment per line.
    #[arg(long)]
    comments: PathBuf,
    /// One label per line, aligned with --comments.
    #[arg(long)]
    labels: PathBuf,
    /// Optional third aligned file naming each line's project; writes one corpus per project.
    #[arg(long)]
    projects: Option<PathBuf>,
    /// Project name when --projects is absent.
    #[arg(long, default_value = "benchmark")]
    project: String,
    /// `satd = ...` / `nonsatd = ...` label vocabulary.
    #[arg(long)]
    label_map: Option<PathBuf>,
    /// Output file, or a directory when --projects is given.
    #[arg(long)]
    out: PathBuf,
}

#[derive(Args)]
struct ScanArgs {
    /// Source file or directory.
    input: PathBuf,
    /// Corpus file to write.
    #[arg(long)]
    out: PathBuf,
    /// Project name recorded on every comment (defaults to the input's name).
    #[arg(long)]
    project: Option<String>,
    /// `key = value` file with language profile and filter settings.
    #[arg(long)]
    config: Option<PathBuf>,
    #[arg(long, value_enum, default_value = "text")]
    format: FormatArg,
}

#[derive(Args, Clone)]
struct MatcherArgs {
    /// Tag file (one per line); defaults to todo, fixme, xxx, hack.
    #[arg(long)]
    tags: Option<PathBuf>,
    /// Pattern file, required by the pattern classifier.
    #[arg(long)]
    patterns: Option<PathBuf>,
    /// Tag matching for the mat classifier.
    #[arg(long, value_enum, default_value = "fuzzy")]
    strategy: StrategyArg,
    /// `project = tag, ...` file for mat-ext; defaults to the bundled benchmark list.
    #[arg(long)]
    project_tags: Option<PathBuf>,
}

#[derive(Args, Clone)]
struct TmArgs {
    /// Fraction of features kept by information gain.
    #[arg(long, default_value_t = 0.10)]
    ratio: f64,
    /// Additive smoothing.
    #[arg(long, default_value_t = 1.0)]
    alpha: f64,
    #[arg(long, value_enum, default_value = "tf-idf")]
    weighting: WeightingArg,
    /// Stop-word file; defaults to the bundled English list.
    #[arg(long)]
    stopwords: Option<PathBuf>,
}

#[derive(Args)]
struct ClassifyArgs {
    /// Corpus file.
    corpus: PathBuf,
    #[arg(long, value_enum, default_value = "mat")]
    classifier: ClassifierKind,
    #[command(flatten)]
    matcher: MatcherArgs,
    /// Trained model for tm and tm+mat.
    #[arg(long)]
    model: Option<PathBuf>,
    /// Train tm on these corpora instead of loading --model.
    #[arg(long, num_args = 1..)]
    train: Vec<PathBuf>,
    #[command(flatten)]
    tm: TmArgs,
    /// Predictions file (JSON lines).
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long, value_enum, default_value = "text")]
    format: FormatArg,
}

#[derive(Args)]
struct TrainArgs {
    /// Labeled corpora (files or directories of .jsonl), one sub-model each.
    #[arg(required = true)]
    corpora: Vec<PathBuf>,
    #[command(flatten)]
    tm: TmArgs,
    #[arg(long)]
    out: PathBuf,
}

#[derive(Args)]
struct EvaluateArgs {
    /// Labeled corpora (files or directories of .jsonl).
    #[arg(required = true)]
    corpora: Vec<PathBuf>,
    /// Repeat to report several classifiers side by side.
    #[arg(long, value_enum, default_values = ["mat"])]
    classifier: Vec<ClassifierKind>,
    #[command(flatten)]
    matcher: MatcherArgs,
    #[command(flatten)]
    tm: TmArgs,
    #[arg(long, value_enum, default_value = "mto")]
    scenario: ScenarioArg,
    /// Write each classifier's predictions as `<dir>/<classifier>.jsonl` (single-prediction runs only).
    #[arg(long)]
    save_predictions: Option<PathBuf>,
    #[arg(long, value_enum, default_value = "text")]
    format: FormatArg,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct CompareArgs {
    /// Labeled corpora to score with --classifier.
    corpora: Vec<PathBuf>,
    #[arg(long, value_enum, default_value = "mat")]
    classifier: ClassifierKind,
    /// Take our scores from this approach of the published table instead of running a classifier.
    #[arg(long, conflicts_with = "corpora")]
    ours_published: Option<String>,
    #[command(flatten)]
    matcher: MatcherArgs,
    #[command(flatten)]
    tm: TmArgs,
    #[arg(long, value_enum, default_value = "mto")]
    scenario: ScenarioArg,
    /// Published scores CSV (approach,project,indicator,value); defaults to the bundled tables.
    #[arg(long)]
    published: Option<PathBuf>,
    /// Approaches to compare against (comma-separated); defaults to every other approach in the table.
    #[arg(long, value_delimiter = ',')]
    against: Vec<String>,
    /// `NAME=FILE` prediction sets for an overlap analysis (at least two).
    #[arg(long = "predictions", value_name = "NAME=FILE")]
    predictions: Vec<String>,
    /// Labeled corpus the prediction sets refer to.
    #[arg(long)]
    gold: Option<PathBuf>,
    #[arg(long, value_enum, default_value = "text")]
    format: FormatArg,
    #[arg(long)]
    out: Option<PathBuf>,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let threads =
        cli.parallelism.map_or_else(|| std::thread::available_parallelism().map_or(1, |n| n.get()), usize::from);
    let result = satd_core::exec::with_parallelism(threads, || commands::run(cli.command));
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::FAILURE
        }
    }
}
