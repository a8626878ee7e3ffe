use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};

#[derive(Parser, Debug)]
#[command(name = "cider-eval", version)]
#[command(about = "Consensus-based caption scoring and metric-vs-human agreement runs")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Build document-frequency tables for a reference corpus and save them
    BuildIdf(BuildIdfArgs),
    /// Score candidate sentences against the reference corpus
    Score(ScoreArgs),
    /// Measure agreement between metrics and human pair judgments
    EvalPairs(EvalPairsArgs),
    /// Pair accuracy as a function of the number of references
    Ablate(AblateArgs),
    /// Rank an image's references by leave-one-out consensus
    Rank(RankArgs),
    /// Win fractions of competing systems under one or more metrics
    CompareSystems(CompareArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Table,
}

#[derive(Args, Debug, Clone)]
pub struct Common {
    /// Reference corpus: JSON object mapping image ids to sentence arrays
    #[arg(long)]
    pub corpus: PathBuf,

    /// Output file; stdout when omitted
    #[arg(long)]
    pub out: Option<PathBuf>,

    #[arg(long, value_enum, default_value_t = Format::Json)]
    pub format: Format,

    /// Worker threads (default: all cores)
    #[arg(long)]
    pub jobs: Option<usize>,
}

#[derive(Args, Debug, Clone)]
pub struct MetricArgs {
    /// Metric name; repeat for several metrics
    #[arg(long = "metric", default_value = "cider")]
    pub metrics: Vec<String>,

    /// Max n-gram order (CIDEr, BLEU) or the order of ROUGE_N
    #[arg(long)]
    pub n: Option<usize>,

    /// Length-penalty width for cider-d
    #[arg(long)]
    pub sigma: Option<f64>,

    /// Disable stemming for metrics that stem by default
    #[arg(long)]
    pub no_stem: bool,
}

#[derive(Args, Debug, Clone)]
#[group(required = true, multiple = false)]
pub struct JudgmentSource {
    /// Pre-aggregated pair judgments
    #[arg(long)]
    pub pairs: Option<PathBuf>,

    /// Raw triplet votes, reduced by two-level majority
    #[arg(long)]
    pub votes: Option<PathBuf>,
}

#[derive(Args, Debug)]
pub struct BuildIdfArgs {
    #[command(flatten)]
    pub common: Common,

    /// Max n-gram order stored
    #[arg(long, default_value_t = 4)]
    pub n: usize,

    /// Count unstemmed n-grams (the table cider-d needs)
    #[arg(long)]
    pub no_stem: bool,
}

#[derive(Args, Debug)]
pub struct ScoreArgs {
    #[command(flatten)]
    pub common: Common,

    #[command(flatten)]
    pub metric: MetricArgs,

    /// Candidates in the corpus format; the first sentence per image is scored
    #[arg(long)]
    pub candidates: PathBuf,

    /// Cached document-frequency table from build-idf
    #[arg(long)]
    pub idf: Option<PathBuf>,

    /// Include each metric's candidate tokens in the report
    #[arg(long)]
    pub dump_tokens: bool,
}

#[derive(Args, Debug)]
pub struct EvalPairsArgs {
    #[command(flatten)]
    pub common: Common,

    #[command(flatten)]
    pub metric: MetricArgs,

    #[command(flatten)]
    pub source: JudgmentSource,

    /// References sampled per pair
    #[arg(long)]
    pub refs: usize,

    #[arg(long, default_value_t = 0)]
    pub seed: u64,

    /// Only evaluate pairs of this kind (HC, HI, HM, MM)
    #[arg(long)]
    pub kind: Option<String>,
}

#[derive(Args, Debug)]
pub struct AblateArgs {
    #[command(flatten)]
    pub common: Common,

    #[command(flatten)]
    pub metric: MetricArgs,

    #[command(flatten)]
    pub source: JudgmentSource,

    /// Reference counts to evaluate, comma separated
    #[arg(long, value_delimiter = ',', required = true)]
    pub counts: Vec<usize>,

    #[arg(long, default_value_t = 5)]
    pub trials: usize,

    #[arg(long, default_value_t = 0)]
    pub seed: u64,

    #[arg(long)]
    pub kind: Option<String>,
}

#[derive(Args, Debug)]
pub struct RankArgs {
    #[command(flatten)]
    pub common: Common,

    #[command(flatten)]
    pub metric: MetricArgs,

    /// Image whose references are ranked
    #[arg(long)]
    pub image: String,
}

#[derive(Args, Debug)]
pub struct CompareArgs {
    #[command(flatten)]
    pub common: Common,

    #[command(flatten)]
    pub metric: MetricArgs,

    /// System outputs as name=path; give at least two
    #[arg(long = "system", required = true)]
    pub systems: Vec<String>,

    /// Score against this many sampled references per image
    #[arg(long)]
    pub refs: Option<usize>,

    #[arg(long, default_value_t = 0)]
    pub seed: u64,
}
