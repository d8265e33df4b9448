//! Category term documents built from the identifiers of project source trees.

mod extract;
mod normalize;

pub use extract::{extract_identifiers, lexical_identifiers, Backend, Extracted, SkipFile, SourceLanguage};
pub use normalize::{normalize_terms, split_identifier, stem, suffix_stem, StemmerKind};

use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::path::{Path, PathBuf};

use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use walkdir::WalkDir;

use crate::dataset::{ClassificationDataset, Field};
use crate::error::{Error, Result};

const DEFAULT_EXTRACTION: &str = include_str!("../../data/extraction.toml");

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ExtractionConfig {
    pub language: String,
    pub backend: Backend,
    pub stemmer: StemmerKind,
    pub split_identifiers: bool,
    pub min_term_length: usize,
    pub extensions: Vec<String>,
    pub excluded_dirs: Vec<String>,
    pub keywords: BTreeSet<String>,
    pub stopwords: BTreeSet<String>,
    pub dictionary: BTreeMap<String, String>,
}

/// On-disk form; every key is optional and falls back to the shipped default.
#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
struct ExtractionFile {
    language: Option<String>,
    backend: Option<Backend>,
    stemmer: Option<StemmerKind>,
    split_identifiers: Option<bool>,
    min_term_length: Option<usize>,
    extensions: Option<Vec<String>>,
    excluded_dirs: Option<Vec<String>>,
    keywords: Option<Vec<String>>,
    stopwords: Option<Vec<String>>,
    dictionary: Option<BTreeMap<String, String>>,
}

fn lowercase_set(v: impl IntoIterator<Item = String>) -> BTreeSet<String> {
    v.into_iter().map(|s| s.trim().to_lowercase()).filter(|s| !s.is_empty()).collect()
}

impl ExtractionConfig {
    fn from_file(file: ExtractionFile, base: Option<&ExtractionConfig>) -> Result<Self> {
        let language = file
            .language
            .or_else(|| base.map(|b| b.language.clone()))
            .unwrap_or_else(|| "java".into());
        let lang = SourceLanguage::from_id(&language)?;
        let same_language = base.is_some_and(|b| b.language == language);
        let inherit = |f: fn(&ExtractionConfig) -> BTreeSet<String>| -> Option<BTreeSet<String>> {
            base.filter(|_| same_language).map(f)
        };

        let cfg = ExtractionConfig {
            backend: file.backend.or(base.map(|b| b.backend)).unwrap_or_default(),
            stemmer: file.stemmer.or(base.map(|b| b.stemmer)).unwrap_or_default(),
            split_identifiers: file
                .split_identifiers
                .or(base.map(|b| b.split_identifiers))
                .unwrap_or(true),
            min_term_length: file
                .min_term_length
                .or(base.map(|b| b.min_term_length))
                .unwrap_or(2),
            extensions: file
                .extensions
                .or_else(|| base.filter(|_| same_language).map(|b| b.extensions.clone()))
                .unwrap_or_else(|| lang.extensions().iter().map(|s| s.to_string()).collect()),
            excluded_dirs: file
                .excluded_dirs
                .or_else(|| base.map(|b| b.excluded_dirs.clone()))
                .unwrap_or_default(),
            keywords: file
                .keywords
                .map(lowercase_set)
                .or_else(|| inherit(|b| b.keywords.clone()))
                .unwrap_or_else(|| lowercase_set(lang.keywords().iter().map(|s| s.to_string()))),
            stopwords: file
                .stopwords
                .map(lowercase_set)
                .or_else(|| base.map(|b| b.stopwords.clone()))
                .unwrap_or_default(),
            dictionary: file
                .dictionary
                .or_else(|| base.map(|b| b.dictionary.clone()))
                .unwrap_or_default(),
            language,
        };
        if cfg.min_term_length == 0 {
            return Err(Error::Config("min_term_length must be at least 1".into()));
        }
        Ok(cfg)
    }

    /// Parses a config file; keys it leaves out take the shipped defaults.
    pub fn from_toml(text: &str) -> Result<Self> {
        let file: ExtractionFile =
            toml::from_str(text).map_err(|e| Error::Config(format!("extraction config: {e}")))?;
        Self::from_file(file, Some(&Self::default()))
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        Self::from_toml(&text)
    }

    pub fn source_language(&self) -> Result<SourceLanguage> {
        SourceLanguage::from_id(&self.language)
    }

    fn matches_extension(&self, path: &Path) -> bool {
        path.extension()
            .and_then(|e| e.to_str())
            .is_some_and(|e| self.extensions.iter().any(|x| x.eq_ignore_ascii_case(e)))
    }

    fn is_excluded_dir(&self, name: &str) -> bool {
        (name.starts_with('.') && name.len() > 1) || self.excluded_dirs.iter().any(|d| d == name)
    }
}

impl Default for ExtractionConfig {
    fn default() -> Self {
        let file: ExtractionFile =
            toml::from_str(DEFAULT_EXTRACTION).expect("shipped extraction config parses");
        ExtractionConfig::from_file(file, None).expect("shipped extraction config is valid")
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TermDocument {
    pub label: String,
    pub term_counts: BTreeMap<String, u64>,
    pub total_terms: u64,
}

impl TermDocument {
    pub fn new(label: impl Into<String>, term_counts: BTreeMap<String, u64>) -> Self {
        let total_terms = term_counts.values().sum();
        TermDocument {
            label: label.into(),
            term_counts,
            total_terms,
        }
    }

    pub fn from_terms<I, S>(label: impl Into<String>, terms: I) -> Self
    where
        I: IntoIterator<Item = S>,
        S: Into<String>,
    {
        let mut counts = BTreeMap::new();
        for t in terms {
            *counts.entry(t.into()).or_insert(0) += 1;
        }
        TermDocument::new(label, counts)
    }

    pub fn count(&self, term: &str) -> u64 {
        self.term_counts.get(term).copied().unwrap_or(0)
    }

    fn merge(&mut self, counts: &BTreeMap<String, u64>) {
        for (t, c) in counts {
            *self.term_counts.entry(t.clone()).or_insert(0) += c;
            self.total_terms += c;
        }
    }

    /// Two-column `term,count` CSV, terms in lexicographic order.
    pub fn to_csv(&self) -> Result<Vec<u8>> {
        let mut w = csv::WriterBuilder::new()
            .terminator(csv::Terminator::Any(b'\n'))
            .from_writer(Vec::new());
        w.write_record(["term", "count"])?;
        for (t, c) in &self.term_counts {
            w.write_record([t.as_str(), &c.to_string()])?;
        }
        w.into_inner()
            .map_err(|e| Error::io("<csv buffer>", e.into_error()))
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ExcludedProject {
    pub name: String,
    pub reason: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct FileNote {
    pub path: PathBuf,
    pub reason: String,
}

/// Term counts of one project's source tree.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct ProjectTerms {
    pub counts: BTreeMap<String, u64>,
    pub files: usize,
    pub skipped: Vec<FileNote>,
    pub lossy: Vec<PathBuf>,
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct CorpusBuild {
    pub documents: Vec<TermDocument>,
    pub excluded: Vec<ExcludedProject>,
    /// Labels whose every project was excluded.
    pub empty_labels: Vec<String>,
    pub skipped_files: Vec<FileNote>,
    pub lossy_files: Vec<PathBuf>,
}

/// Points every project at `root/<project name>`.
pub fn attach_source_roots(ds: &mut ClassificationDataset, root: &Path) {
    for p in &mut ds.projects {
        p.source_root = Some(root.join(&p.name));
    }
}

/// Source files under `root` selected by the config, sorted by path.
pub fn source_files(root: &Path, cfg: &ExtractionConfig) -> Vec<PathBuf> {
    let mut files: Vec<PathBuf> = WalkDir::new(root)
        .follow_links(false)
        .into_iter()
        .filter_entry(|e| {
            e.depth() == 0
                || !e.file_type().is_dir()
                || !cfg.is_excluded_dir(&e.file_name().to_string_lossy())
        })
        .filter_map(|e| e.ok())
        .filter(|e| e.file_type().is_file() && cfg.matches_extension(e.path()))
        .map(|e| e.into_path())
        .collect();
    files.sort();
    files
}

/// Extracts and normalizes the terms of every matching file under `root`.
pub fn project_terms(root: &Path, cfg: &ExtractionConfig) -> Result<ProjectTerms> {
    if !root.is_dir() {
        return Err(Error::io(
            root,
            std::io::Error::new(std::io::ErrorKind::NotFound, "source root is not a directory"),
        ));
    }
    let files = source_files(root, cfg);
    let per_file: Vec<(PathBuf, std::result::Result<(Vec<String>, bool), String>)> = files
        .into_par_iter()
        .map(|path| {
            let res = match std::fs::read(&path) {
                Ok(bytes) => match extract_identifiers(&bytes, cfg) {
                    Ok(e) => Ok((normalize_terms(&e.identifiers, cfg), e.lossy)),
                    Err(SkipFile(reason)) => Err(reason),
                },
                Err(e) => Err(e.to_string()),
            };
            (path, res)
        })
        .collect();

    let mut out = ProjectTerms::default();
    for (path, res) in per_file {
        match res {
            Ok((terms, lossy)) => {
                out.files += 1;
                if lossy {
                    out.lossy.push(path);
                }
                for t in terms {
                    *out.counts.entry(t).or_insert(0) += 1;
                }
            }
            Err(reason) => out.skipped.push(FileNote { path, reason }),
        }
    }
    Ok(out)
}

/// Extracted terms of every project in a dataset, computed once and
/// groupable by either annotation field.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct ProjectCorpus {
    /// Term counts per project index; `None` for excluded projects.
    terms: Vec<Option<BTreeMap<String, u64>>>,
    pub excluded: Vec<ExcludedProject>,
    pub skipped_files: Vec<FileNote>,
    pub lossy_files: Vec<PathBuf>,
}

/// Extracts the terms of every project. Projects without a readable source
/// tree or without any term left after filtering are excluded and reported.
pub fn collect_project_terms(ds: &ClassificationDataset, cfg: &ExtractionConfig) -> Result<ProjectCorpus> {
    cfg.source_language()?;
    let mut corpus = ProjectCorpus::default();
    for p in &ds.projects {
        let mut exclude = |reason: String| {
            corpus.excluded.push(ExcludedProject {
                name: p.name.clone(),
                reason,
            });
        };
        let Some(root) = &p.source_root else {
            exclude("no source root".into());
            corpus.terms.push(None);
            continue;
        };
        match project_terms(root, cfg) {
            Err(e) => {
                exclude(e.to_string());
                corpus.terms.push(None);
            }
            Ok(t) => {
                let files = t.files;
                corpus.skipped_files.extend(t.skipped);
                corpus.lossy_files.extend(t.lossy);
                if t.counts.is_empty() {
                    exclude(format!("no terms left after filtering ({files} files read)"));
                    corpus.terms.push(None);
                } else {
                    corpus.terms.push(Some(t.counts));
                }
            }
        }
    }
    Ok(corpus)
}

/// Sums project terms into one document per label of `field`, in label
/// order of first appearance.
pub fn group_documents(ds: &ClassificationDataset, field: Field, corpus: &ProjectCorpus) -> Result<CorpusBuild> {
    let mut docs: HashMap<String, TermDocument> = HashMap::new();
    for (p, terms) in ds.projects.iter().zip(&corpus.terms) {
        let Some(terms) = terms else { continue };
        for label in p.annotations(field) {
            docs.entry(label.to_string())
                .or_insert_with(|| TermDocument::new(label, BTreeMap::new()))
                .merge(terms);
        }
    }
    let mut build = CorpusBuild {
        excluded: corpus.excluded.clone(),
        skipped_files: corpus.skipped_files.clone(),
        lossy_files: corpus.lossy_files.clone(),
        ..Default::default()
    };
    for label in ds.label_universe(field) {
        match docs.remove(&label) {
            Some(d) => build.documents.push(d),
            None => build.empty_labels.push(label),
        }
    }
    if build.documents.is_empty() {
        return Err(Error::EmptyCorpus);
    }
    Ok(build)
}

/// One term document per label of `field`, summing the terms of all member
/// projects.
pub fn build_category_documents(
    ds: &ClassificationDataset,
    field: Field,
    cfg: &ExtractionConfig,
) -> Result<CorpusBuild> {
    let corpus = collect_project_terms(ds, cfg)?;
    group_documents(ds, field, &corpus)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn default_config_is_lowercase() {
        let cfg = ExtractionConfig::default();
        assert!(cfg.keywords.contains("class"));
        assert!(cfg.stopwords.contains("println"));
        assert!(cfg.stopwords.iter().all(|s| s == &s.to_lowercase()));
        assert_eq!(cfg.extensions, vec!["java"]);
    }

    #[test]
    fn toml_overrides_merge_with_defaults() {
        let cfg = ExtractionConfig::from_toml("stemmer = \"none\"\nstopwords = [\"Foo\"]\n").unwrap();
        assert_eq!(cfg.stemmer, StemmerKind::None);
        assert_eq!(cfg.stopwords.iter().collect::<Vec<_>>(), vec!["foo"]);
        assert!(cfg.keywords.contains("class"));
        assert!(ExtractionConfig::from_toml("language = \"cobol\"").is_err());
        assert!(ExtractionConfig::from_toml("bogus = 1").is_err());
    }

    #[test]
    fn additive_merge() {
        let mut a = TermDocument::from_terms("A", ["x", "x"]);
        a.merge(&TermDocument::from_terms("B", ["x", "y"]).term_counts);
        assert_eq!(a.count("x"), 3);
        assert_eq!(a.count("y"), 1);
        assert_eq!(a.total_terms, 4);
    }

    #[test]
    fn term_csv() {
        let d = TermDocument::from_terms("A", ["b", "a", "b"]);
        assert_eq!(d.to_csv().unwrap(), b"term,count\na,1\nb,2\n");
    }
}
