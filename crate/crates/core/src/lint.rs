//! Detectors for the seven classification antipatterns:
//!
//! | code | antipattern |
//! |------|-------------|
//! | MT   | mixed taxonomy (technologies next to application domains) |
//! | MG   | mixed granularity (labels in an IS-A relation) |
//! | SC   | single category per project |
//! | NE   | non-exhaustive sibling coverage |
//! | NRC  | non-relevant (outlier) category |
//! | UJC  | unnecessarily joined categories |
//! | SKC  | sink category |
//!
//! Detectors only read their inputs; none of them changes the dataset.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::path::Path;
use std::sync::LazyLock;

use regex::Regex;
use serde::{Deserialize, Serialize};

use crate::dataset::{class_distribution, Arity, ClassificationDataset, Field};
use crate::embed::{label_similarity_matrix, label_words, similarity_from_vectors, EmbeddingTable, LabelVector};
use crate::error::{Error, Result};
use crate::similarity::{MeanStd, SimilarityMatrix};

const DEFAULT_LINT: &str = include_str!("../data/lint.toml");

/// Slack for threshold comparisons on computed means.
const EPS: f64 = 1e-9;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum AntipatternCode {
    MT,
    MG,
    SC,
    NE,
    NRC,
    UJC,
    SKC,
}

impl AntipatternCode {
    pub const ALL: [AntipatternCode; 7] = [
        AntipatternCode::MT,
        AntipatternCode::MG,
        AntipatternCode::SC,
        AntipatternCode::NE,
        AntipatternCode::NRC,
        AntipatternCode::UJC,
        AntipatternCode::SKC,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            AntipatternCode::MT => "MT",
            AntipatternCode::MG => "MG",
            AntipatternCode::SC => "SC",
            AntipatternCode::NE => "NE",
            AntipatternCode::NRC => "NRC",
            AntipatternCode::UJC => "UJC",
            AntipatternCode::SKC => "SKC",
        }
    }

    pub fn description(self) -> &'static str {
        match self {
            AntipatternCode::MT => "mixed taxonomy",
            AntipatternCode::MG => "mixed granularity",
            AntipatternCode::SC => "single category",
            AntipatternCode::NE => "non-exhaustive categories",
            AntipatternCode::NRC => "non-relevant category",
            AntipatternCode::UJC => "unnecessarily joined categories",
            AntipatternCode::SKC => "sink category",
        }
    }
}

impl fmt::Display for AntipatternCode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Severity {
    Info,
    Warning,
    Violation,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AntipatternFinding {
    pub code: AntipatternCode,
    pub subjects: Vec<String>,
    pub severity: Severity,
    pub evidence: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub metric: Option<f64>,
}

impl AntipatternFinding {
    fn new(code: AntipatternCode, subjects: Vec<String>, severity: Severity, evidence: String) -> Self {
        debug_assert!(!subjects.is_empty() && !evidence.is_empty());
        AntipatternFinding {
            code,
            subjects,
            severity,
            evidence,
            metric: None,
        }
    }

    fn with_metric(mut self, m: f64) -> Self {
        self.metric = Some(m);
        self
    }
}

fn sort_findings(findings: &mut [AntipatternFinding]) {
    findings.sort_by(|a, b| a.code.cmp(&b.code).then_with(|| a.subjects.cmp(&b.subjects)));
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct LintConfig {
    pub technology_lexicon: BTreeSet<String>,
    pub sink_lexicon: BTreeSet<String>,
    pub sink_share_threshold: f64,
    pub mg_similarity_threshold: f64,
    pub nrc_centroid_threshold: f64,
    /// Groups of co-hyponyms; aliases of one sibling are separated by `|`.
    pub sibling_sets: Vec<Vec<String>>,
}

/// Partial config as read from disk.
#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
struct LintFile {
    technology_lexicon: Option<Vec<String>>,
    sink_lexicon: Option<Vec<String>>,
    sink_share_threshold: Option<f64>,
    mg_similarity_threshold: Option<f64>,
    nrc_centroid_threshold: Option<f64>,
    sibling_sets: Option<Vec<Vec<String>>>,
}

fn norm(label: &str) -> String {
    label.trim().to_lowercase()
}

impl LintConfig {
    fn from_file(f: LintFile, base: Option<&LintConfig>) -> Result<Self> {
        let set = |v: Option<Vec<String>>, b: Option<BTreeSet<String>>| -> BTreeSet<String> {
            v.map(|v| v.iter().map(|s| norm(s)).collect()).or(b).unwrap_or_default()
        };
        let cfg = LintConfig {
            technology_lexicon: set(f.technology_lexicon, base.map(|b| b.technology_lexicon.clone())),
            sink_lexicon: set(f.sink_lexicon, base.map(|b| b.sink_lexicon.clone())),
            sink_share_threshold: f
                .sink_share_threshold
                .or(base.map(|b| b.sink_share_threshold))
                .unwrap_or(0.20),
            mg_similarity_threshold: f
                .mg_similarity_threshold
                .or(base.map(|b| b.mg_similarity_threshold))
                .unwrap_or(0.45),
            nrc_centroid_threshold: f
                .nrc_centroid_threshold
                .or(base.map(|b| b.nrc_centroid_threshold))
                .unwrap_or(0.05),
            sibling_sets: f
                .sibling_sets
                .or_else(|| base.map(|b| b.sibling_sets.clone()))
                .unwrap_or_default(),
        };
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn validate(&self) -> Result<()> {
        for (name, v) in [
            ("sink_share_threshold", self.sink_share_threshold),
            ("mg_similarity_threshold", self.mg_similarity_threshold),
            ("nrc_centroid_threshold", self.nrc_centroid_threshold),
        ] {
            if !(v > 0.0 && v < 1.0) {
                return Err(Error::Config(format!("{name} must be in (0, 1), got {v}")));
            }
        }
        Ok(())
    }

    pub fn from_toml(text: &str) -> Result<Self> {
        let f: LintFile =
            toml::from_str(text).map_err(|e| Error::Config(format!("lint config: {e}")))?;
        Self::from_file(f, Some(&Self::default()))
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        Self::from_toml(&text)
    }
}

impl Default for LintConfig {
    fn default() -> Self {
        let f: LintFile = toml::from_str(DEFAULT_LINT).expect("shipped lint config parses");
        LintConfig::from_file(f, None).expect("shipped lint config is valid")
    }
}

pub fn detect_mt(labels: &[String], cfg: &LintConfig) -> Vec<AntipatternFinding> {
    let (tech, domain): (Vec<&String>, Vec<&String>) = labels
        .iter()
        .partition(|l| cfg.technology_lexicon.contains(&norm(l)));
    let severity = if domain.is_empty() {
        Severity::Info
    } else {
        Severity::Violation
    };
    let mut out: Vec<AntipatternFinding> = tech
        .into_iter()
        .map(|l| {
            AntipatternFinding::new(
                AntipatternCode::MT,
                vec![l.clone()],
                severity,
                format!(
                    "`{l}` names a technology; label set also has {} domain label(s)",
                    domain.len()
                ),
            )
        })
        .collect();
    sort_findings(&mut out);
    out
}

/// Rule A flags pairs whose word sets strictly contain one another (subjects
/// are ordered specific, general). Rule B flags pairs whose similarity reaches
/// the configured threshold.
pub fn detect_mg(
    labels: &[String],
    label_sims: Option<&SimilarityMatrix>,
    cfg: &LintConfig,
) -> Vec<AntipatternFinding> {
    let words: Vec<BTreeSet<String>> = labels.iter().map(|l| label_words(l).into_iter().collect()).collect();
    let mut out = Vec::new();
    for i in 0..labels.len() {
        for j in (i + 1)..labels.len() {
            let (a, b) = (&labels[i], &labels[j]);
            let contains = |x: &BTreeSet<String>, y: &BTreeSet<String>| {
                !y.is_empty() && x.len() > y.len() && y.is_subset(x)
            };
            let specific_general = if contains(&words[i], &words[j]) {
                Some((a, b))
            } else if contains(&words[j], &words[i]) {
                Some((b, a))
            } else {
                None
            };
            let sim = label_sims
                .and_then(|m| m.get(a, b))
                .filter(|s| *s >= cfg.mg_similarity_threshold);

            let finding = match (specific_general, sim) {
                (Some((s, g)), sim) => {
                    let mut ev = format!("rule A: `{s}` is a specialization of `{g}` (word containment)");
                    if let Some(v) = sim {
                        ev.push_str(&format!("; rule B: similarity {v:.3}"));
                    }
                    let f = AntipatternFinding::new(
                        AntipatternCode::MG,
                        vec![s.clone(), g.clone()],
                        Severity::Violation,
                        ev,
                    );
                    match sim {
                        Some(v) => f.with_metric(v),
                        None => f,
                    }
                }
                (None, Some(v)) => {
                    let mut pair = vec![a.clone(), b.clone()];
                    pair.sort();
                    AntipatternFinding::new(
                        AntipatternCode::MG,
                        pair,
                        Severity::Warning,
                        format!(
                            "rule B: similarity {v:.3} >= {}",
                            cfg.mg_similarity_threshold
                        ),
                    )
                    .with_metric(v)
                }
                (None, None) => continue,
            };
            out.push(finding);
        }
    }
    sort_findings(&mut out);
    out
}

pub fn detect_sc(ds: &ClassificationDataset, field: Field) -> Vec<AntipatternFinding> {
    let evidence = match ds.arity {
        Arity::SingleLabel => "single-label annotation scheme: every project has exactly one category",
        Arity::MultiLabel => {
            if ds.is_empty() || ds.projects.iter().any(|p| p.annotations(field).len() > 1) {
                return Vec::new();
            }
            "degenerate multi-label: every project carries exactly one label"
        }
    };
    let subjects = ds.label_universe(field);
    if subjects.is_empty() {
        return Vec::new();
    }
    vec![AntipatternFinding::new(
        AntipatternCode::SC,
        subjects,
        Severity::Violation,
        evidence.to_string(),
    )]
}

pub fn detect_ne(labels: &[String], cfg: &LintConfig) -> Vec<AntipatternFinding> {
    let mut out = Vec::new();
    for set in &cfg.sibling_sets {
        let mut present_labels = Vec::new();
        let mut present = Vec::new();
        let mut missing = Vec::new();
        for sibling in set {
            let aliases: Vec<String> = sibling.split('|').map(norm).filter(|s| !s.is_empty()).collect();
            let canonical = sibling.split('|').next().unwrap_or("").trim().to_string();
            let hits: Vec<&String> = labels.iter().filter(|l| aliases.contains(&norm(l))).collect();
            if hits.is_empty() {
                missing.push(canonical);
            } else {
                present.push(canonical);
                present_labels.extend(hits.into_iter().cloned());
            }
        }
        if !present.is_empty() && !missing.is_empty() {
            present_labels.sort();
            present_labels.dedup();
            out.push(AntipatternFinding::new(
                AntipatternCode::NE,
                present_labels,
                Severity::Warning,
                format!(
                    "sibling set partially covered: present [{}], missing [{}]",
                    present.join(", "),
                    missing.join(", ")
                ),
            ));
        }
    }
    sort_findings(&mut out);
    out
}

/// Flags labels whose mean similarity to the other labels falls below
/// `max(nrc_centroid_threshold, mean - 2 std)` of all such means.
pub fn detect_nrc(label_vectors: &[LabelVector], cfg: &LintConfig) -> Result<Vec<AntipatternFinding>> {
    let embeddable: Vec<LabelVector> = label_vectors.iter().filter(|v| v.is_embeddable()).cloned().collect();
    if embeddable.len() < 3 {
        return Err(Error::InsufficientInput(format!(
            "need at least 3 embeddable labels, found {}",
            embeddable.len()
        )));
    }
    let m = similarity_from_vectors(&embeddable)?;
    Ok(nrc_from_matrix(&m, cfg))
}

fn nrc_from_matrix(m: &SimilarityMatrix, cfg: &LintConfig) -> Vec<AntipatternFinding> {
    let k = m.len();
    let means: Vec<f64> = (0..k)
        .map(|i| {
            (0..k).filter(|&j| j != i).map(|j| m.values()[i][j]).sum::<f64>() / (k - 1) as f64
        })
        .collect();
    let stats = MeanStd::of(&means).expect("k >= 3");
    let threshold = cfg.nrc_centroid_threshold.max(stats.mean - 2.0 * stats.std);
    let mut out: Vec<AntipatternFinding> = means
        .iter()
        .enumerate()
        .filter(|(_, &mi)| mi < threshold - EPS)
        .map(|(i, &mi)| {
            AntipatternFinding::new(
                AntipatternCode::NRC,
                vec![m.names()[i].clone()],
                Severity::Warning,
                format!(
                    "mean similarity to other labels {mi:.3} < {threshold:.3} (set mean {:.3}, std {:.3})",
                    stats.mean, stats.std
                ),
            )
            .with_metric(mi)
        })
        .collect();
    sort_findings(&mut out);
    out
}

static JOINED: LazyLock<Regex> = LazyLock::new(|| {
    Regex::new(r"(?i)\p{Alphabetic}{2,}(?:\s+(?:and|&)\s+|\s*/\s*)\p{Alphabetic}{2,}").unwrap()
});

pub fn detect_ujc(labels: &[String]) -> Vec<AntipatternFinding> {
    let mut out: Vec<AntipatternFinding> = labels
        .iter()
        .filter_map(|l| {
            let m = JOINED.find(l)?;
            Some(AntipatternFinding::new(
                AntipatternCode::UJC,
                vec![l.clone()],
                Severity::Warning,
                format!("label joins categories: `{}`", m.as_str()),
            ))
        })
        .collect();
    sort_findings(&mut out);
    out
}

pub fn detect_skc(ds: &ClassificationDataset, field: Field, cfg: &LintConfig) -> Vec<AntipatternFinding> {
    let Ok(dist) = class_distribution(ds, field) else {
        return Vec::new();
    };
    let total = dist.total() as f64;
    let sinks: Vec<(&str, usize)> = dist
        .iter()
        .filter(|(l, _)| cfg.sink_lexicon.contains(&norm(l)))
        .collect();
    let combined = sinks.iter().map(|(_, c)| *c).sum::<usize>() as f64 / total;
    let mut out: Vec<AntipatternFinding> = sinks
        .iter()
        .map(|&(l, c)| {
            let share = c as f64 / total;
            let severity = if share >= cfg.sink_share_threshold - EPS
                || combined >= cfg.sink_share_threshold - EPS
            {
                Severity::Violation
            } else {
                Severity::Warning
            };
            let mut ev = format!("catch-all label holds {c}/{} examples (share {share:.3})", dist.total());
            if sinks.len() > 1 {
                ev.push_str(&format!("; all sink labels together {combined:.3}"));
            }
            AntipatternFinding::new(AntipatternCode::SKC, vec![l.to_string()], severity, ev)
                .with_metric(share)
        })
        .collect();
    sort_findings(&mut out);
    out
}

/// Presence of each antipattern: a code is present iff it has a finding at
/// warning severity or above.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct AntipatternSummary(pub BTreeMap<AntipatternCode, bool>);

impl AntipatternSummary {
    pub fn from_findings(findings: &[AntipatternFinding]) -> Self {
        let mut map: BTreeMap<AntipatternCode, bool> =
            AntipatternCode::ALL.iter().map(|c| (*c, false)).collect();
        for f in findings {
            if f.severity >= Severity::Warning {
                map.insert(f.code, true);
            }
        }
        AntipatternSummary(map)
    }

    pub fn present(&self) -> Vec<AntipatternCode> {
        self.0.iter().filter(|(_, p)| **p).map(|(c, _)| *c).collect()
    }

    pub fn is_present(&self, code: AntipatternCode) -> bool {
        self.0.get(&code).copied().unwrap_or(false)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AntipatternReport {
    pub findings: Vec<AntipatternFinding>,
    pub summary: AntipatternSummary,
    /// Detectors that were skipped or ran in a reduced mode.
    pub coverage_notes: Vec<String>,
}

impl AntipatternReport {
    fn new(mut findings: Vec<AntipatternFinding>, coverage_notes: Vec<String>) -> Self {
        sort_findings(&mut findings);
        let summary = AntipatternSummary::from_findings(&findings);
        AntipatternReport {
            findings,
            summary,
            coverage_notes,
        }
    }

    pub fn has_violations(&self) -> bool {
        self.findings.iter().any(|f| f.severity == Severity::Violation)
    }

    pub fn by_code(&self, code: AntipatternCode) -> Vec<&AntipatternFinding> {
        self.findings.iter().filter(|f| f.code == code).collect()
    }
}

/// Runs the detectors that only need the label strings (MT, MG, NE, NRC, UJC).
pub fn lint_labels(labels: &[String], embeddings: Option<&EmbeddingTable>, cfg: &LintConfig) -> AntipatternReport {
    let mut notes = Vec::new();
    let mut findings = Vec::new();
    findings.extend(detect_mt(labels, cfg));
    findings.extend(detect_ne(labels, cfg));
    findings.extend(detect_ujc(labels));

    let sims = match embeddings {
        None => {
            notes.push("MG: no embeddings, lexical containment rule only".to_string());
            notes.push("NRC: skipped, requires embeddings".to_string());
            None
        }
        Some(table) => match label_similarity_matrix(labels, table) {
            Ok(s) => {
                if !s.unembeddable.is_empty() {
                    notes.push(format!(
                        "labels without any in-vocabulary word were not embedded: {}",
                        s.unembeddable.join(", ")
                    ));
                }
                Some(s)
            }
            Err(e) => {
                notes.push(format!("MG: lexical rule only; NRC: skipped ({e})"));
                None
            }
        },
    };
    findings.extend(detect_mg(labels, sims.as_ref().map(|s| &s.matrix), cfg));
    if let Some(s) = &sims {
        match detect_nrc(&s.vectors, cfg) {
            Ok(f) => findings.extend(f),
            Err(e) => notes.push(format!("NRC: skipped ({e})")),
        }
    }
    AntipatternReport::new(findings, notes)
}

/// Runs all seven detectors over the labels of `field`.
pub fn lint_all(
    ds: &ClassificationDataset,
    field: Field,
    embeddings: Option<&EmbeddingTable>,
    cfg: &LintConfig,
) -> AntipatternReport {
    let labels = ds.label_universe(field);
    let base = lint_labels(&labels, embeddings, cfg);
    let mut findings = base.findings;
    findings.extend(detect_sc(ds, field));
    findings.extend(detect_skc(ds, field, cfg));
    AntipatternReport::new(findings, base.coverage_notes)
}

/// Renders presence rows as a fixed-width table with one column per code.
pub fn render_table(rows: &[(&str, &AntipatternSummary)]) -> String {
    let width = rows.iter().map(|(n, _)| n.chars().count()).max().unwrap_or(0).max(7);
    let mut out = format!("{:width$}", "dataset");
    for c in AntipatternCode::ALL {
        out.push_str(&format!(" {:>4}", c.as_str()));
    }
    out.push('\n');
    for (name, s) in rows {
        out.push_str(&format!("{name:width$}"));
        for c in AntipatternCode::ALL {
            out.push_str(&format!(" {:>4}", if s.is_present(c) { "x" } else { "." }));
        }
        out.push('\n');
    }
    out
}
