use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use taxolint::analysis::OutputFormat;
use taxolint::reduce::MajorityRule;
use taxolint::{Arity, Field};

/// Directory searched for `extraction.toml`, `vectorize.toml` and
/// `lint.toml` when the matching `--config-*` flag is not given.
pub const CONFIG_DIR_ENV: &str = "TAXOLINT_CONFIG_DIR";

#[derive(Debug, Parser)]
#[command(name = "taxolint", version, about = "Measure and lint software classification taxonomies")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Print size, category count, balance and class size range.
    Stats(StatsArgs),
    /// Check a label set for classification antipatterns.
    Lint(LintArgs),
    /// Run every available stage and write report artifacts.
    Analyze(AnalyzeArgs),
    /// Apply a label mapping and compare the result with the original.
    Reduce(ReduceArgs),
    /// Aggregate per-annotator level ratings by majority vote.
    Levels(LevelsArgs),
}

#[derive(Debug, Clone, Copy, ValueEnum)]
pub enum FieldArg {
    OriginalCategory,
    Label,
}

impl From<FieldArg> for Field {
    fn from(f: FieldArg) -> Field {
        match f {
            FieldArg::OriginalCategory => Field::OriginalCategory,
            FieldArg::Label => Field::Label,
        }
    }
}

#[derive(Debug, Clone, Copy, ValueEnum)]
pub enum ArityArg {
    Single,
    Multi,
}

impl From<ArityArg> for Arity {
    fn from(a: ArityArg) -> Arity {
        match a {
            ArityArg::Single => Arity::SingleLabel,
            ArityArg::Multi => Arity::MultiLabel,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum FormatArg {
    Json,
    Csv,
    Svg,
}

impl From<FormatArg> for OutputFormat {
    fn from(f: FormatArg) -> OutputFormat {
        match f {
            FormatArg::Json => OutputFormat::Json,
            FormatArg::Csv => OutputFormat::Csv,
            FormatArg::Svg => OutputFormat::Svg,
        }
    }
}

#[derive(Debug, Clone, Copy, ValueEnum)]
pub enum RuleArg {
    Strict,
    Plurality,
}

impl From<RuleArg> for MajorityRule {
    fn from(r: RuleArg) -> MajorityRule {
        match r {
            RuleArg::Strict => MajorityRule::Strict,
            RuleArg::Plurality => MajorityRule::Plurality,
        }
    }
}

#[derive(Debug, Args)]
pub struct DatasetArgs {
    /// Dataset CSV (project.name, project.desc, project.link, category, category.desc, label).
    #[arg(long)]
    pub dataset: PathBuf,
    /// Annotation to analyze.
    #[arg(long, value_enum, default_value = "label")]
    pub field: FieldArg,
    /// Whether the label column may hold several `|`-separated labels.
    #[arg(long, value_enum, default_value = "single")]
    pub arity: ArityArg,
}

#[derive(Debug, Args)]
pub struct ConfigArgs {
    #[arg(long)]
    pub config_extraction: Option<PathBuf>,
    #[arg(long)]
    pub config_vectorize: Option<PathBuf>,
    #[arg(long)]
    pub config_lint: Option<PathBuf>,
    /// Default location of the three config files.
    #[arg(long, env = CONFIG_DIR_ENV)]
    pub config_dir: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct OutArgs {
    /// Output directory; it must not exist yet or be empty unless --overwrite is set.
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// Replace an existing, non-empty output directory.
    #[arg(long)]
    pub overwrite: bool,
}

#[derive(Debug, Args)]
pub struct StatsArgs {
    #[command(flatten)]
    pub dataset: DatasetArgs,
    #[command(flatten)]
    pub out: OutArgs,
}

#[derive(Debug, Args)]
pub struct LintArgs {
    #[command(flatten)]
    pub dataset: DatasetArgs,
    /// Word-vector file (word2vec/fastText text format).
    #[arg(long)]
    pub embeddings: Option<PathBuf>,
    #[command(flatten)]
    pub config: ConfigArgs,
    #[command(flatten)]
    pub out: OutArgs,
}

#[derive(Debug, Args)]
pub struct AnalyzeArgs {
    #[command(flatten)]
    pub dataset: DatasetArgs,
    #[arg(long)]
    pub embeddings: Option<PathBuf>,
    /// Directory holding one source tree per project, named after project.name.
    #[arg(long)]
    pub sources: Option<PathBuf>,
    #[command(flatten)]
    pub config: ConfigArgs,
    #[arg(long, required = true)]
    pub out: PathBuf,
    #[arg(long)]
    pub overwrite: bool,
    /// Artifact formats to write.
    #[arg(long, value_enum, value_delimiter = ',', default_value = "json,csv,svg")]
    pub format: Vec<FormatArg>,
    /// Heatmap color scale: blues or greys.
    #[arg(long, default_value = "blues")]
    pub color_scale: String,
    /// Similarity at or above which a pair is listed as an outlier.
    #[arg(long, default_value_t = 0.45)]
    pub outlier_threshold: f64,
}

#[derive(Debug, Args)]
pub struct ReduceArgs {
    #[arg(long)]
    pub dataset: PathBuf,
    #[arg(long, value_enum, default_value = "single")]
    pub arity: ArityArg,
    /// Mapping CSV with columns original,path.
    #[arg(long)]
    pub mapping: PathBuf,
    #[arg(long)]
    pub embeddings: Option<PathBuf>,
    #[arg(long)]
    pub sources: Option<PathBuf>,
    #[command(flatten)]
    pub config: ConfigArgs,
    #[arg(long, required = true)]
    pub out: PathBuf,
    #[arg(long)]
    pub overwrite: bool,
}

#[derive(Debug, Args)]
pub struct LevelsArgs {
    /// Ratings CSV with columns label,annotator,level.
    #[arg(long)]
    pub ratings: PathBuf,
    #[arg(long, value_enum, default_value = "strict")]
    pub rule: RuleArg,
    #[command(flatten)]
    pub out: OutArgs,
}
