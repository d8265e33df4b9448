//! End-to-end orchestration: dataset summaries, label similarity, category
//! similarity from source code, antipatterns, and the artifacts written for
//! each run.

use std::collections::{BTreeMap, BTreeSet};
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::corpus::{group_documents, ProjectCorpus, TermDocument};
use crate::dataset::{class_distribution, ClassificationDataset, Field};
use crate::embed::{label_similarity_matrix, EmbeddingTable};
use crate::error::{Error, Result};
use crate::lint::{lint_all, AntipatternSummary};
use crate::metrics::summary;
use crate::reduce::{apply_mapping, compare, ComparisonReport, LabelMapping, SideAnalysis};
use crate::report::{
    emit_heatmap_svg, emit_json, emit_matrix_csv, fingerprint, AnalysisReport, CategorySimilaritySection,
    ColorScale, DatasetSection, LabelSimilaritySection, ReportConfigs,
};
use crate::similarity::{corpus_similarity_stats, similarity_distribution, MeanStd, SimilarityMatrix};
use crate::vectorize::{category_similarity_matrix, vectorize};

pub const REPORT_FILE: &str = "report.json";
pub const LABEL_SIMILARITY_STEM: &str = "label_similarity";
pub const CATEGORY_SIMILARITY_STEM: &str = "category_similarity";
pub const TERMS_DIR: &str = "terms";

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum OutputFormat {
    Json,
    Csv,
    Svg,
}

impl OutputFormat {
    pub const ALL: [OutputFormat; 3] = [OutputFormat::Json, OutputFormat::Csv, OutputFormat::Svg];
}

impl FromStr for OutputFormat {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_lowercase().as_str() {
            "json" => Ok(OutputFormat::Json),
            "csv" => Ok(OutputFormat::Csv),
            "svg" => Ok(OutputFormat::Svg),
            other => Err(Error::Config(format!("unknown output format {other:?}"))),
        }
    }
}

#[derive(Debug, Clone)]
pub struct AnalysisOptions {
    pub field: Field,
    /// Pairs at or above this similarity are listed as outliers.
    pub outlier_threshold: f64,
    pub color_scale: ColorScale,
    pub formats: BTreeSet<OutputFormat>,
}

impl Default for AnalysisOptions {
    fn default() -> Self {
        AnalysisOptions {
            field: Field::Label,
            outlier_threshold: 0.45,
            color_scale: ColorScale::default(),
            formats: OutputFormat::ALL.into_iter().collect(),
        }
    }
}

/// Everything a run produced. Artifact keys are relative paths using `/`.
#[derive(Debug, Clone)]
pub struct Analysis {
    pub report: AnalysisReport,
    pub label_matrix: Option<SimilarityMatrix>,
    pub category_matrix: Option<SimilarityMatrix>,
    pub documents: Vec<TermDocument>,
    pub artifacts: BTreeMap<String, Vec<u8>>,
}

impl Analysis {
    pub fn has_violations(&self) -> bool {
        self.report.antipatterns.as_ref().is_some_and(|a| a.has_violations())
    }
}

/// Summaries over both annotation fields; a field whose summary is undefined
/// (for example a single category) is left out with a note.
pub fn dataset_section(ds: &ClassificationDataset, field: Field, notes: &mut Vec<String>) -> Result<DatasetSection> {
    let mut summaries = BTreeMap::new();
    for f in [Field::OriginalCategory, Field::Label] {
        match summary(ds, f) {
            Ok(s) => {
                summaries.insert(f, s);
            }
            Err(e) if f != field => notes.push(format!("summary over {}: {e}", f.as_str())),
            Err(e) => return Err(e),
        }
    }
    Ok(DatasetSection {
        field,
        summaries,
        distribution: class_distribution(ds, field)?,
    })
}

struct CategoryStage {
    section: CategorySimilaritySection,
    matrix: SimilarityMatrix,
    documents: Vec<TermDocument>,
}

fn category_stage(
    ds: &ClassificationDataset,
    field: Field,
    corpus: &ProjectCorpus,
    configs: &ReportConfigs,
    outlier_threshold: f64,
) -> Result<CategoryStage> {
    let build = group_documents(ds, field, corpus)?;
    let tfidf = vectorize(&build.documents, &configs.vectorize)?;
    let matrix = category_similarity_matrix(&tfidf)?;
    let section = CategorySimilaritySection {
        stats: corpus_similarity_stats(&matrix)?,
        distribution: similarity_distribution(&matrix, outlier_threshold)?,
        vocabulary_size: tfidf.vocabulary.len(),
        documents: build.documents.len(),
        zero_rows: matrix.zero_rows().to_vec(),
        empty_labels: build.empty_labels,
        excluded_projects: build.excluded,
        skipped_files: build.skipped_files.len(),
        lossy_files: build.lossy_files.len(),
    };
    Ok(CategoryStage {
        section,
        matrix,
        documents: build.documents,
    })
}

fn file_slug(label: &str) -> String {
    let mut out = String::new();
    for c in label.chars() {
        if c.is_alphanumeric() {
            out.extend(c.to_lowercase());
        } else if !out.ends_with('-') {
            out.push('-');
        }
    }
    out.trim_matches('-').to_string()
}

/// Runs every stage whose inputs are available. Without embeddings the
/// label similarity stage is skipped; without a project corpus the category
/// similarity stage is skipped. Both skips are recorded as notes.
pub fn analyze(
    ds: &ClassificationDataset,
    embeddings: Option<&EmbeddingTable>,
    corpus: Option<&ProjectCorpus>,
    configs: &ReportConfigs,
    opts: &AnalysisOptions,
) -> Result<Analysis> {
    if opts.formats.is_empty() {
        return Err(Error::Config("at least one output format is required".into()));
    }
    let field = opts.field;
    let mut notes = Vec::new();
    let dataset = dataset_section(ds, field, &mut notes)?;
    let mut report = AnalysisReport::new(configs.clone(), dataset);
    let labels = ds.label_universe(field);

    let mut label_matrix = None;
    match embeddings {
        None => notes.push("label similarity skipped: no embeddings given".into()),
        Some(table) => match label_similarity_matrix(&labels, table) {
            Ok(sim) => {
                let oov_words = sim
                    .vectors
                    .iter()
                    .filter(|v| !v.oov_words.is_empty())
                    .map(|v| (v.label.clone(), v.oov_words.clone()))
                    .collect();
                report.label_similarity = Some(LabelSimilaritySection {
                    distribution: similarity_distribution(&sim.matrix, opts.outlier_threshold)?,
                    unembeddable: sim.unembeddable,
                    oov_words,
                });
                label_matrix = Some(sim.matrix);
            }
            Err(Error::InsufficientInput(msg)) => notes.push(format!("label similarity skipped: {msg}")),
            Err(e) => return Err(e),
        },
    }

    let mut category_matrix = None;
    let mut documents = Vec::new();
    match corpus {
        None => notes.push("category similarity skipped: no source trees given".into()),
        Some(corpus) => {
            let stage = category_stage(ds, field, corpus, configs, opts.outlier_threshold)?;
            notes.push(format!(
                "category documents depend on the stopword list ({} entries) and identifier splitting; compare only runs with the same config fingerprint",
                configs.extraction.stopwords.len()
            ));
            if !stage.section.excluded_projects.is_empty() {
                notes.push(format!(
                    "{} projects excluded from the corpus",
                    stage.section.excluded_projects.len()
                ));
            }
            report.category_similarity = Some(stage.section);
            category_matrix = Some(stage.matrix);
            documents = stage.documents;
        }
    }

    let lint = lint_all(ds, field, embeddings, &configs.lint);
    report.antipatterns = Some(lint);
    report.notes = notes;

    let mut artifacts = BTreeMap::new();
    if opts.formats.contains(&OutputFormat::Json) {
        artifacts.insert(REPORT_FILE.to_string(), emit_json(&report)?);
    }
    for (stem, m) in [
        (LABEL_SIMILARITY_STEM, &label_matrix),
        (CATEGORY_SIMILARITY_STEM, &category_matrix),
    ] {
        let Some(m) = m else { continue };
        if opts.formats.contains(&OutputFormat::Csv) {
            artifacts.insert(format!("{stem}.csv"), emit_matrix_csv(m)?);
        }
        if opts.formats.contains(&OutputFormat::Svg) {
            artifacts.insert(format!("{stem}.svg"), emit_heatmap_svg(m, &opts.color_scale)?);
        }
    }
    if opts.formats.contains(&OutputFormat::Csv) {
        for (i, d) in documents.iter().enumerate() {
            artifacts.insert(format!("{TERMS_DIR}/{:03}-{}.csv", i + 1, file_slug(&d.label)), d.to_csv()?);
        }
    }

    Ok(Analysis {
        report,
        label_matrix,
        category_matrix,
        documents,
        artifacts,
    })
}

/// Summary, corpus similarity and antipattern presence of one side of a
/// before/after comparison.
pub fn side_analysis(
    ds: &ClassificationDataset,
    field: Field,
    embeddings: Option<&EmbeddingTable>,
    corpus: Option<&ProjectCorpus>,
    configs: &ReportConfigs,
) -> Result<SideAnalysis> {
    let similarity: Option<MeanStd> = match corpus {
        None => None,
        Some(c) => Some(category_stage(ds, field, c, configs, 1.0)?.section.stats),
    };
    let lint = lint_all(ds, field, embeddings, &configs.lint);
    Ok(SideAnalysis {
        summary: summary(ds, field)?,
        similarity,
        antipatterns: AntipatternSummary::from_findings(&lint.findings),
        vectorize_config: configs.vectorize,
        lint_fingerprint: fingerprint(&configs.lint),
    })
}

/// Applies `mapping` and compares the original categories of `ds` with the
/// reduced labels.
pub fn reduce_and_compare(
    ds: &ClassificationDataset,
    mapping: &LabelMapping,
    embeddings: Option<&EmbeddingTable>,
    corpus: Option<&ProjectCorpus>,
    configs: &ReportConfigs,
) -> Result<(ClassificationDataset, ComparisonReport)> {
    let reduced = apply_mapping(ds, mapping)?;
    let before = side_analysis(ds, Field::OriginalCategory, embeddings, corpus, configs)?;
    let after = side_analysis(&reduced, Field::Label, embeddings, corpus, configs)?;
    let comparison = compare(&before, &after, &reduced)?;
    Ok((reduced, comparison))
}
