use std::collections::{BTreeMap, HashSet};
use std::fs;
use std::path::{Path, PathBuf};

use anyhow::{Context, Result};
use taxolint::analysis::{analyze as run_analysis, dataset_section, reduce_and_compare, AnalysisOptions};
use taxolint::corpus::{attach_source_roots, collect_project_terms, ProjectCorpus};
use taxolint::dataset::load_dataset;
use taxolint::embed::{label_words, load_embeddings_filtered};
use taxolint::lint::{lint_all, render_table};
use taxolint::reduce::{aggregate_levels, load_mapping, parse_ratings, LevelOutcome};
use taxolint::report::{emit_json, to_canonical_json, ColorScale, ReportConfigs};
use taxolint::{
    AnalysisReport, Arity, ClassificationDataset, DatasetSummary, EmbeddingTable, ExtractionConfig, Field,
    LintConfig, VectorizeConfig,
};

use crate::args::{AnalyzeArgs, ConfigArgs, DatasetArgs, LevelsArgs, LintArgs, OutArgs, ReduceArgs, StatsArgs};
use crate::output::commit_dir;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
#[repr(u8)]
pub enum Status {
    Clean = 0,
    Violations = 1,
    Error = 2,
}

fn read_dataset(path: &Path, arity: Arity) -> Result<ClassificationDataset> {
    let bytes = fs::read(path).with_context(|| format!("reading {}", path.display()))?;
    let (ds, report) = load_dataset(&bytes, arity).with_context(|| format!("loading {}", path.display()))?;
    for w in &report.warnings {
        eprintln!("warning: {}: line {}: {}", path.display(), w.row, w.message);
    }
    Ok(ds)
}

fn dataset(args: &DatasetArgs) -> Result<ClassificationDataset> {
    read_dataset(&args.dataset, args.arity.into())
}

/// The explicit flag wins; otherwise `<config dir>/<name>` when it exists;
/// otherwise the shipped defaults.
fn config_path(explicit: &Option<PathBuf>, dir: &Option<PathBuf>, name: &str) -> Option<PathBuf> {
    explicit
        .clone()
        .or_else(|| dir.as_ref().map(|d| d.join(name)).filter(|p| p.is_file()))
}

fn configs(args: &ConfigArgs) -> Result<ReportConfigs> {
    let extraction = match config_path(&args.config_extraction, &args.config_dir, "extraction.toml") {
        Some(p) => ExtractionConfig::load(&p).with_context(|| format!("loading {}", p.display()))?,
        None => ExtractionConfig::default(),
    };
    let vectorize = match config_path(&args.config_vectorize, &args.config_dir, "vectorize.toml") {
        Some(p) => VectorizeConfig::load(&p).with_context(|| format!("loading {}", p.display()))?,
        None => VectorizeConfig::default(),
    };
    let lint = match config_path(&args.config_lint, &args.config_dir, "lint.toml") {
        Some(p) => LintConfig::load(&p).with_context(|| format!("loading {}", p.display()))?,
        None => LintConfig::default(),
    };
    Ok(ReportConfigs {
        extraction,
        vectorize,
        lint,
    })
}

/// Loads only the vectors of words that occur in `labels`.
fn embeddings<'a>(path: &Option<PathBuf>, labels: impl IntoIterator<Item = &'a String>) -> Result<Option<EmbeddingTable>> {
    let Some(path) = path else { return Ok(None) };
    let keep: HashSet<String> = labels.into_iter().flat_map(|l| label_words(l)).collect();
    let loaded = load_embeddings_filtered(path, Some(&keep)).with_context(|| format!("loading {}", path.display()))?;
    for w in &loaded.warnings {
        eprintln!("warning: {}: {w}", path.display());
    }
    Ok(Some(loaded.table))
}

fn corpus(ds: &mut ClassificationDataset, sources: &Option<PathBuf>, cfg: &ExtractionConfig) -> Result<Option<ProjectCorpus>> {
    let Some(root) = sources else { return Ok(None) };
    if !root.is_dir() {
        anyhow::bail!("sources root {} is not a directory", root.display());
    }
    attach_source_roots(ds, root);
    let c = collect_project_terms(ds, cfg)?;
    for e in &c.excluded {
        eprintln!("note: project {} excluded: {}", e.name, e.reason);
    }
    for f in &c.skipped_files {
        eprintln!("note: skipped {}: {}", f.path.display(), f.reason);
    }
    Ok(Some(c))
}

fn summary_row(s: &DatasetSummary) -> String {
    format!("{} {} {:.2} {} {}", s.examples, s.categories, s.balance, s.min, s.max)
}

const SUMMARY_HEADER: &str = "examples categories balance min max";

fn write_out(out: &OutArgs, files: BTreeMap<String, Vec<u8>>) -> Result<()> {
    match &out.out {
        Some(dir) => commit_dir(dir, &files, out.overwrite),
        None => Ok(()),
    }
}

pub fn stats(args: &StatsArgs) -> Result<Status> {
    let ds = dataset(&args.dataset)?;
    let field: Field = args.dataset.field.into();
    let mut notes = Vec::new();
    let section = dataset_section(&ds, field, &mut notes)?;
    let s = &section.summaries[&field];
    println!("{SUMMARY_HEADER}");
    println!("{}", summary_row(s));
    for n in &notes {
        eprintln!("note: {n}");
    }
    write_out(&args.out, BTreeMap::from([("summary.json".to_string(), to_canonical_json(&section)?)]))?;
    Ok(Status::Clean)
}

pub fn lint(args: &LintArgs) -> Result<Status> {
    let ds = dataset(&args.dataset)?;
    let field: Field = args.dataset.field.into();
    let cfg = configs(&args.config)?;
    let labels = ds.label_universe(field);
    let table = embeddings(&args.embeddings, &labels)?;
    let report = lint_all(&ds, field, table.as_ref(), &cfg.lint);

    for f in &report.findings {
        println!("{:<9} {:<3} {}: {}", format!("{:?}", f.severity).to_lowercase(), f.code, f.subjects.join(" | "), f.evidence);
    }
    if !report.findings.is_empty() {
        println!();
    }
    let name = args.dataset.dataset.file_stem().map(|s| s.to_string_lossy().into_owned()).unwrap_or_default();
    print!("{}", render_table(&[(&name, &report.summary)]));
    for n in &report.coverage_notes {
        eprintln!("note: {n}");
    }
    write_out(&args.out, BTreeMap::from([("lint.json".to_string(), to_canonical_json(&report)?)]))?;
    Ok(if report.has_violations() { Status::Violations } else { Status::Clean })
}

pub fn analyze(args: &AnalyzeArgs) -> Result<Status> {
    let mut ds = dataset(&args.dataset)?;
    let field: Field = args.dataset.field.into();
    let cfg = configs(&args.config)?;
    let opts = AnalysisOptions {
        field,
        outlier_threshold: args.outlier_threshold,
        color_scale: ColorScale::from_name(&args.color_scale)?,
        formats: args.format.iter().map(|&f| f.into()).collect(),
    };
    let labels = ds.label_universe(field);
    let table = embeddings(&args.embeddings, &labels)?;
    let corpus = corpus(&mut ds, &args.sources, &cfg.extraction)?;
    let analysis = run_analysis(&ds, table.as_ref(), corpus.as_ref(), &cfg, &opts)?;
    commit_dir(&args.out, &analysis.artifacts, args.overwrite)?;

    let r = &analysis.report;
    println!("{SUMMARY_HEADER}");
    println!("{}", summary_row(&r.dataset.summaries[&field]));
    if let Some(l) = &r.label_similarity {
        println!("label similarity: mean {:.4} std {:.4} ({} outlier pairs)", l.distribution.mean, l.distribution.std, l.distribution.outliers.len());
    }
    if let Some(c) = &r.category_similarity {
        println!("category similarity: mean {:.4} std {:.4} over {} categories", c.stats.mean, c.stats.std, c.documents);
    }
    if let Some(a) = &r.antipatterns {
        print!("{}", render_table(&[("dataset", &a.summary)]));
    }
    for n in &r.notes {
        eprintln!("note: {n}");
    }
    println!("wrote {} files to {}", analysis.artifacts.len(), args.out.display());
    Ok(if analysis.has_violations() { Status::Violations } else { Status::Clean })
}

pub fn reduce(args: &ReduceArgs) -> Result<Status> {
    let mut ds = read_dataset(&args.dataset, args.arity.into())?;
    let mapping = load_mapping(&args.mapping).with_context(|| format!("loading {}", args.mapping.display()))?;
    let cfg = configs(&args.config)?;
    let mut labels = ds.label_universe(Field::OriginalCategory);
    labels.extend(mapping.final_universe().iter().cloned());
    let table = embeddings(&args.embeddings, &labels)?;
    let corpus = corpus(&mut ds, &args.sources, &cfg.extraction)?;
    let (reduced, comparison) = reduce_and_compare(&ds, &mapping, table.as_ref(), corpus.as_ref(), &cfg)?;

    let mut notes = Vec::new();
    let mut report = AnalysisReport::new(cfg, dataset_section(&reduced, Field::Label, &mut notes)?);
    report.antipatterns = Some(lint_all(&reduced, Field::Label, table.as_ref(), &report.configs.lint));
    report.notes = notes;

    println!("{:<8} {SUMMARY_HEADER}", "");
    println!("{:<8} {}", "before", summary_row(&comparison.before.summary));
    println!("{:<8} {}", "after", summary_row(&comparison.after.summary));
    if let (Some(b), Some(a)) = (comparison.before.similarity, comparison.after.similarity) {
        println!("category similarity: {:.4}±{:.4} -> {:.4}±{:.4}", b.mean, b.std, a.mean, a.std);
    }
    print!(
        "{}",
        render_table(&[("before", &comparison.before.antipatterns), ("after", &comparison.after.antipatterns)])
    );
    report.comparison = Some(comparison);

    let files = BTreeMap::from([
        ("reduced.csv".to_string(), reduced.to_csv()?),
        ("report.json".to_string(), emit_json(&report)?),
    ]);
    commit_dir(&args.out, &files, args.overwrite)?;
    Ok(Status::Clean)
}

pub fn levels(args: &LevelsArgs) -> Result<Status> {
    let bytes = fs::read(&args.ratings).with_context(|| format!("reading {}", args.ratings.display()))?;
    let ratings = parse_ratings(&bytes).with_context(|| format!("loading {}", args.ratings.display()))?;
    let outcome = aggregate_levels(&ratings, args.rule.into());
    for (label, o) in &outcome {
        match o {
            LevelOutcome::Level(l) => println!("{label}\t{l}"),
            LevelOutcome::NoMajority => println!("{label}\tno majority"),
        }
    }
    write_out(&args.out, BTreeMap::from([("levels.json".to_string(), to_canonical_json(&outcome)?)]))?;
    Ok(Status::Clean)
}
