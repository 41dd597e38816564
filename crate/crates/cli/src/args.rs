use std::path::PathBuf;

use affectframe::{EntityDimension, FrameDimension};
use chrono::{DateTime, Utc};
use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;

/// Contextual affective analysis: induce connotation lexicons from
/// contextual verb embeddings and score how entities are portrayed.
#[derive(Debug, Parser)]
#[command(name = "affectframe", version)]
pub struct Cli {
    /// TOML run configuration; command-line flags override its values.
    #[arg(long, global = true, env = "AFFECTFRAME_CONFIG")]
    pub config: Option<PathBuf>,

    /// Directory receiving every output plus `manifest.json` and the
    /// effective `config.toml`.
    #[arg(long, global = true)]
    pub out_dir: Option<PathBuf>,

    /// Worker threads; defaults to the machine's parallelism. Output does not
    /// depend on this.
    #[arg(long, global = true)]
    pub threads: Option<usize>,

    /// Seed for lexicon splits and synthetic data.
    #[arg(long, global = true)]
    pub seed: Option<u64>,

    /// Repeat for more logging (-v info, -vv debug).
    #[arg(short, long, global = true, action = clap::ArgAction::Count)]
    pub verbose: u8,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Validate an annotated corpus, optionally deduplicate it and apply an
    /// entity merge map.
    Ingest(IngestArgs),
    /// Train one classifier per connotation dimension.
    Train(TrainArgs),
    /// Score every entity-verb pair and export contributions and profiles.
    Score(ScoreArgs),
    /// Entity tables, pairwise comparisons, power graphs and temporal splits.
    #[command(subcommand)]
    Analyze(AnalyzeCommand),
    /// Evaluation protocols.
    #[command(subcommand)]
    Eval(EvalCommand),
    /// Write a seeded synthetic dataset for trying the pipeline.
    Synth(SynthArgs),
}

impl Command {
    pub fn name(&self) -> &'static str {
        match self {
            Command::Ingest(_) => "ingest",
            Command::Train(_) => "train",
            Command::Score(_) => "score",
            Command::Analyze(AnalyzeCommand::Top(_)) => "analyze top",
            Command::Analyze(AnalyzeCommand::Pair(_)) => "analyze pair",
            Command::Analyze(AnalyzeCommand::Graph(_)) => "analyze graph",
            Command::Analyze(AnalyzeCommand::Temporal(_)) => "analyze temporal",
            Command::Eval(EvalCommand::Lexicon(_)) => "eval lexicon",
            Command::Eval(EvalCommand::Contextual(_)) => "eval contextual",
            Command::Eval(EvalCommand::Entity(_)) => "eval entity",
            Command::Synth(_) => "synth",
        }
    }
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct LexiconArgs {
    /// Categorical power/agency lexicon (comma-separated).
    #[arg(long)]
    pub power_agency: Option<PathBuf>,
    /// Real-valued sentiment lexicon (tab-separated).
    #[arg(long)]
    pub sentiment: Option<PathBuf>,
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct IngestArgs {
    /// Annotated corpus (line-delimited JSON).
    #[arg(long)]
    pub corpus: Option<PathBuf>,
    /// Drop near-duplicates closer than this cosine distance; the bare flag
    /// uses the configured threshold (0.011 unless overridden).
    #[arg(long, num_args = 0..=1)]
    pub dedup_threshold: Option<Option<f64>>,
    /// Tab-separated `alias<TAB>canonical` entity merges.
    #[arg(long)]
    pub merge_map: Option<PathBuf>,
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct TrainArgs {
    /// Annotated corpus (line-delimited JSON).
    #[arg(long)]
    pub corpus: Option<PathBuf>,
    #[command(flatten)]
    pub lexicons: LexiconArgs,
    /// Dimensions to train; defaults to every dimension a lexicon covers.
    #[arg(long = "dimension", value_delimiter = ',')]
    pub dimensions: Vec<FrameDimension>,
    /// Directory with `<dimension>/{train,dev,test}.txt` lemma lists.
    #[arg(long)]
    pub splits: Option<PathBuf>,
    /// Per-class weight values searched, comma-separated.
    #[arg(long, value_delimiter = ',')]
    pub class_weights: Option<Vec<f64>>,
    /// L2 strengths searched, comma-separated.
    #[arg(long, value_delimiter = ',')]
    pub l2: Option<Vec<f64>>,
    /// Stop once the gradient norm falls below this value.
    #[arg(long)]
    pub tolerance: Option<f64>,
    /// Iteration cap per fit.
    #[arg(long)]
    pub max_iterations: Option<usize>,
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct SliceArgs {
    /// Restrict to these outlets (repeatable).
    #[arg(long = "outlet")]
    pub outlets: Vec<String>,
    /// Inclusive lower bound on publication time (RFC 3339).
    #[arg(long)]
    pub from: Option<DateTime<Utc>>,
    /// Exclusive upper bound on publication time (RFC 3339).
    #[arg(long)]
    pub until: Option<DateTime<Utc>>,
    /// Keep only documents containing this token; needs the corpus.
    #[arg(long)]
    pub keyword: Option<String>,
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct ScoreArgs {
    /// Annotated corpus (line-delimited JSON).
    #[arg(long)]
    pub corpus: Option<PathBuf>,
    /// Directory of `<dimension>.json` model files.
    #[arg(long)]
    pub models: Option<PathBuf>,
    /// Score with the lexicons directly instead of trained models.
    #[arg(long)]
    pub lexicon_scorer: bool,
    #[command(flatten)]
    pub lexicons: LexiconArgs,
    #[command(flatten)]
    pub slice: SliceArgs,
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct ScoresInput {
    /// Output directory of a `score` run.
    #[arg(long)]
    pub scores: Option<PathBuf>,
    /// Corpus consulted for keyword slices.
    #[arg(long)]
    pub corpus: Option<PathBuf>,
    #[command(flatten)]
    pub slice: SliceArgs,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum DirectionArg {
    Asc,
    Desc,
}

#[derive(Debug, Subcommand)]
pub enum AnalyzeCommand {
    /// Frequent proper-noun entities ordered by one dimension.
    Top(TopArgs),
    /// Two entities compared per outlet.
    Pair(PairArgs),
    /// Relative-power graph in DOT and JSON.
    Graph(GraphArgs),
    /// Entity scores before and after a cutoff time.
    Temporal(TemporalArgs),
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct TopArgs {
    #[command(flatten)]
    pub input: ScoresInput,
    #[arg(long, default_value = "sentiment")]
    pub dimension: EntityDimension,
    /// Number of most frequent proper-noun entities considered.
    #[arg(short = 'k', long)]
    pub top_k: Option<usize>,
    #[arg(long, value_enum, default_value = "desc")]
    pub direction: DirectionArg,
    /// Drop scores built from fewer verb contributions.
    #[arg(long)]
    pub min_count: Option<usize>,
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct PairArgs {
    #[command(flatten)]
    pub input: ScoresInput,
    #[arg(long)]
    pub a: String,
    #[arg(long)]
    pub b: String,
    #[arg(long, default_value = "sentiment")]
    pub dimension: EntityDimension,
    /// Outlets must mention both entities at least this often.
    #[arg(long)]
    pub min_mentions: Option<usize>,
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct GraphArgs {
    #[command(flatten)]
    pub input: ScoresInput,
    #[arg(short = 'k', long)]
    pub top_k: Option<usize>,
    /// Entities left out of the graph (repeatable).
    #[arg(long = "exclude")]
    pub exclude: Vec<String>,
    /// File with one excluded entity per line.
    #[arg(long)]
    pub exclusions: Option<PathBuf>,
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct TemporalArgs {
    #[command(flatten)]
    pub input: ScoresInput,
    /// Documents at or after this time form the second slice.
    #[arg(long)]
    pub cutoff: Option<DateTime<Utc>>,
    #[arg(long, default_value = "sentiment")]
    pub dimension: EntityDimension,
    #[arg(short = 'k', long)]
    pub top_k: Option<usize>,
}

#[derive(Debug, Subcommand)]
pub enum EvalCommand {
    /// Held-out lexicon verbs: majority baseline and both aggregation modes.
    Lexicon(EvalLexiconArgs),
    /// Sentence-level sentiment annotations: agreement and prediction.
    Contextual(EvalContextualArgs),
    /// Pairwise power accuracy against entity rankings.
    Entity(EvalEntityArgs),
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct EvalLexiconArgs {
    #[command(flatten)]
    pub lexicons: LexiconArgs,
    #[arg(long = "dimension", value_delimiter = ',')]
    pub dimensions: Vec<FrameDimension>,
    #[arg(long)]
    pub splits: Option<PathBuf>,
    /// Report only the majority baseline, without models or a corpus.
    #[arg(long)]
    pub majority: bool,
    /// Corpus supplying verb occurrences for model evaluation.
    #[arg(long)]
    pub corpus: Option<PathBuf>,
    /// Directory of `<dimension>.json` model files.
    #[arg(long)]
    pub models: Option<PathBuf>,
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct EvalContextualArgs {
    /// Corpus holding the annotated sentences with verb embeddings.
    #[arg(long)]
    pub corpus: Option<PathBuf>,
    /// Directory of `<dimension>.json` model files.
    #[arg(long)]
    pub models: Option<PathBuf>,
    /// Sentence annotations of writer sentiment toward the agent.
    #[arg(long)]
    pub agent_annotations: Option<PathBuf>,
    /// Sentence annotations of writer sentiment toward the theme.
    #[arg(long)]
    pub theme_annotations: Option<PathBuf>,
    /// File listing the evaluated verbs, one lemma per line; defaults to
    /// every annotated verb.
    #[arg(long)]
    pub lemmas: Option<PathBuf>,
    #[arg(long, value_enum, default_value = "interval")]
    pub metric: MetricArg,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum MetricArg {
    Interval,
    Ordinal,
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct EvalEntityArgs {
    /// Tab-separated `annotator, step, entity, rank` rows.
    #[arg(long)]
    pub rankings: Option<PathBuf>,
    /// Highest rank on the annotation scale.
    #[arg(long, default_value_t = 10)]
    pub scale: u8,
    /// Drop samples whose annotators differ by more than this many ranks.
    #[arg(long, default_value_t = 2.0)]
    pub max_rank_difference: f64,
    /// Tab-separated `step, document` rows: documents read by each step.
    /// Without it every step sees the whole corpus.
    #[arg(long)]
    pub steps: Option<PathBuf>,
    /// `score` output from trained models.
    #[arg(long)]
    pub model_scores: Option<PathBuf>,
    /// `score` output from the lexicon scorer.
    #[arg(long)]
    pub lexicon_scores: Option<PathBuf>,
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct SynthArgs {
    #[arg(long, default_value_t = 120)]
    pub verbs: usize,
    #[arg(long, default_value_t = 80)]
    pub documents: usize,
    #[arg(long, default_value_t = 8)]
    pub entities: usize,
    #[arg(long, default_value_t = 16)]
    pub embedding_dim: usize,
}
