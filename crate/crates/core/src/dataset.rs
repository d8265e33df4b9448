//! Classification datasets in the replication-package CSV schema.
//!
//! A dataset is a list of projects, each annotated with the category it had in
//! the source taxonomy and (optionally) the label it received after reduction.
//! Multi-label annotations are stored as a `|`-separated list in the `label`
//! column.

use std::collections::{BTreeMap, HashMap, HashSet};
use std::fmt;
use std::path::PathBuf;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub const COL_NAME: &str = "project.name";
pub const COL_DESC: &str = "project.desc";
pub const COL_LINK: &str = "project.link";
pub const COL_CATEGORY: &str = "category";
pub const COL_CATEGORY_DESC: &str = "category.desc";
pub const COL_LABEL: &str = "label";

/// Schema columns in serialization order.
pub const SCHEMA_COLUMNS: [&str; 6] = [
    COL_NAME,
    COL_DESC,
    COL_LINK,
    COL_CATEGORY,
    COL_CATEGORY_DESC,
    COL_LABEL,
];

pub const LABEL_DELIMITER: char = '|';

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Arity {
    #[default]
    SingleLabel,
    MultiLabel,
}

/// Which annotation of a project an analysis looks at.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Field {
    OriginalCategory,
    #[default]
    Label,
}

impl Field {
    pub fn as_str(self) -> &'static str {
        match self {
            Field::OriginalCategory => "original_category",
            Field::Label => "label",
        }
    }
}

impl std::str::FromStr for Field {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "original_category" | "category" | "original" => Ok(Field::OriginalCategory),
            "label" => Ok(Field::Label),
            other => Err(Error::Config(format!(
                "unknown field `{other}` (expected `original_category` or `label`)"
            ))),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Project {
    pub name: String,
    pub description: String,
    pub url: String,
    pub original_category: String,
    pub category_description: String,
    /// Reduced labels. Empty until a mapping has been applied, in which case
    /// the original category stands in for the label.
    pub labels: Vec<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub source_root: Option<PathBuf>,
    /// Values of unrecognized columns, aligned with
    /// [`ClassificationDataset::extra_columns`].
    #[serde(default)]
    pub extra: Vec<String>,
}

impl Project {
    pub fn new(name: impl Into<String>, original_category: impl Into<String>) -> Self {
        Project {
            name: name.into(),
            description: String::new(),
            url: String::new(),
            original_category: original_category.into(),
            category_description: String::new(),
            labels: Vec::new(),
            source_root: None,
            extra: Vec::new(),
        }
    }

    pub fn with_labels<I, S>(mut self, labels: I) -> Self
    where
        I: IntoIterator<Item = S>,
        S: Into<String>,
    {
        self.labels = labels.into_iter().map(Into::into).collect();
        self
    }

    /// The annotations of this project for `field`.
    pub fn annotations(&self, field: Field) -> Vec<&str> {
        match field {
            Field::OriginalCategory => vec![self.original_category.as_str()],
            Field::Label if self.labels.is_empty() => vec![self.original_category.as_str()],
            Field::Label => self.labels.iter().map(String::as_str).collect(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Default, Serialize, Deserialize)]
pub struct ClassificationDataset {
    pub projects: Vec<Project>,
    pub arity: Arity,
    #[serde(default)]
    pub extra_columns: Vec<String>,
}

impl ClassificationDataset {
    pub fn new(projects: Vec<Project>, arity: Arity) -> Self {
        ClassificationDataset {
            projects,
            arity,
            extra_columns: Vec::new(),
        }
    }

    pub fn len(&self) -> usize {
        self.projects.len()
    }

    pub fn is_empty(&self) -> bool {
        self.projects.is_empty()
    }

    /// Distinct annotations for `field` in order of first appearance.
    pub fn label_universe(&self, field: Field) -> Vec<String> {
        let mut seen = HashSet::new();
        let mut out = Vec::new();
        for p in &self.projects {
            for l in p.annotations(field) {
                if seen.insert(l) {
                    out.push(l.to_string());
                }
            }
        }
        out
    }

    /// Total number of (project, annotation) pairs for `field`.
    pub fn annotation_count(&self, field: Field) -> usize {
        self.projects.iter().map(|p| p.annotations(field).len()).sum()
    }

    /// Serializes to CSV with the schema columns first, then any preserved
    /// extra columns.
    pub fn to_csv(&self) -> Result<Vec<u8>> {
        let mut w = csv::WriterBuilder::new()
            .terminator(csv::Terminator::Any(b'\n'))
            .from_writer(Vec::new());
        let mut header: Vec<&str> = SCHEMA_COLUMNS.to_vec();
        header.extend(self.extra_columns.iter().map(String::as_str));
        w.write_record(&header)?;
        for p in &self.projects {
            let labels = p.labels.join(&LABEL_DELIMITER.to_string());
            let mut rec: Vec<&str> = vec![
                &p.name,
                &p.description,
                &p.url,
                &p.original_category,
                &p.category_description,
                &labels,
            ];
            for i in 0..self.extra_columns.len() {
                rec.push(p.extra.get(i).map(String::as_str).unwrap_or(""));
            }
            w.write_record(&rec)?;
        }
        w.into_inner()
            .map_err(|e| Error::io("<csv buffer>", e.into_error()))
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct RowIssue {
    /// 1-based line number in the CSV input (the header is line 1).
    pub row: usize,
    pub message: String,
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct ValidationReport {
    pub errors: Vec<RowIssue>,
    pub warnings: Vec<RowIssue>,
}

impl ValidationReport {
    pub fn is_loadable(&self) -> bool {
        self.errors.is_empty()
    }

    fn error(&mut self, row: usize, message: impl Into<String>) {
        self.errors.push(RowIssue {
            row,
            message: message.into(),
        });
    }

    fn warning(&mut self, row: usize, message: impl Into<String>) {
        self.warnings.push(RowIssue {
            row,
            message: message.into(),
        });
    }
}

impl fmt::Display for ValidationReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for e in &self.errors {
            writeln!(f, "  error: line {}: {}", e.row, e.message)?;
        }
        for w in &self.warnings {
            writeln!(f, "  warning: line {}: {}", w.row, w.message)?;
        }
        Ok(())
    }
}

/// Parses a dataset CSV, returning it together with any non-fatal warnings.
pub fn load_dataset(bytes: &[u8], arity: Arity) -> Result<(ClassificationDataset, ValidationReport)> {
    if bytes.iter().all(|b| b.is_ascii_whitespace()) {
        return Err(Error::EmptyInput("dataset CSV is empty".into()));
    }
    let text = std::str::from_utf8(bytes)
        .map_err(|e| Error::Format {
            line: 0,
            message: format!("dataset is not valid UTF-8: {e}"),
        })?;
    let text = text.strip_prefix('\u{feff}').unwrap_or(text);

    let mut rdr = csv::ReaderBuilder::new()
        .has_headers(true)
        .trim(csv::Trim::All)
        .from_reader(text.as_bytes());
    let headers: Vec<String> = rdr.headers()?.iter().map(str::to_string).collect();
    let col = |name: &str| headers.iter().position(|h| h == name);

    let name_ix = col(COL_NAME).ok_or_else(|| Error::MissingColumn(COL_NAME.into()))?;
    let cat_ix = col(COL_CATEGORY).ok_or_else(|| Error::MissingColumn(COL_CATEGORY.into()))?;
    let desc_ix = col(COL_DESC);
    let link_ix = col(COL_LINK);
    let cat_desc_ix = col(COL_CATEGORY_DESC);
    let label_ix = col(COL_LABEL);

    let mut report = ValidationReport::default();
    let extra_ixs: Vec<usize> = (0..headers.len())
        .filter(|i| !SCHEMA_COLUMNS.contains(&headers[*i].as_str()))
        .collect();
    for &i in &extra_ixs {
        report.warning(1, format!("unrecognized column `{}` preserved as metadata", headers[i]));
    }

    let mut projects = Vec::new();
    let mut seen: HashMap<(String, String), usize> = HashMap::new();
    let mut duplicates: BTreeMap<(String, String), Vec<usize>> = BTreeMap::new();

    for rec in rdr.records() {
        let rec = rec?;
        let line = rec.position().map(|p| p.line() as usize).unwrap_or(0);
        let get = |ix: Option<usize>| ix.and_then(|i| rec.get(i)).unwrap_or("").to_string();

        let name = get(Some(name_ix));
        let category = get(Some(cat_ix));
        if name.is_empty() {
            report.error(line, "empty project.name");
        }
        if category.is_empty() {
            report.error(line, "empty category");
        }

        let raw_label = get(label_ix);
        let labels: Vec<String> = match arity {
            Arity::MultiLabel => raw_label
                .split(LABEL_DELIMITER)
                .map(str::trim)
                .filter(|s| !s.is_empty())
                .map(str::to_string)
                .collect(),
            Arity::SingleLabel => {
                if raw_label.contains(LABEL_DELIMITER) {
                    report.error(
                        line,
                        format!("label `{raw_label}` holds several labels in a single-label dataset"),
                    );
                }
                if raw_label.is_empty() {
                    Vec::new()
                } else {
                    vec![raw_label]
                }
            }
        };
        if label_ix.is_some() && labels.is_empty() {
            report.warning(line, "empty label, falling back to category");
        }

        let key = (name.clone(), category.clone());
        if let Some(first) = seen.get(&key) {
            duplicates
                .entry(key)
                .or_insert_with(|| vec![*first])
                .push(line);
        } else {
            seen.insert(key, line);
        }

        projects.push(Project {
            name,
            description: get(desc_ix),
            url: get(link_ix),
            original_category: category,
            category_description: get(cat_desc_ix),
            labels,
            source_root: None,
            extra: extra_ixs.iter().map(|&i| get(Some(i))).collect(),
        });
    }

    for ((name, category), lines) in duplicates {
        let rows: Vec<String> = lines.iter().map(usize::to_string).collect();
        report.error(
            lines[0],
            format!(
                "duplicate project `{name}` in category `{category}` on lines {}",
                rows.join(", ")
            ),
        );
    }

    if projects.is_empty() && report.errors.is_empty() {
        return Err(Error::EmptyInput("dataset CSV has no data rows".into()));
    }
    if !report.is_loadable() {
        report.errors.sort_by_key(|e| e.row);
        return Err(Error::Validation(report));
    }

    let ds = ClassificationDataset {
        projects,
        arity,
        extra_columns: extra_ixs.iter().map(|&i| headers[i].clone()).collect(),
    };
    Ok((ds, report))
}

pub fn parse_dataset(bytes: &[u8], arity: Arity) -> Result<ClassificationDataset> {
    load_dataset(bytes, arity).map(|(ds, _)| ds)
}

/// Class sizes ordered by descending count, ties broken lexicographically.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ClassDistribution(pub Vec<(String, usize)>);

impl ClassDistribution {
    pub fn from_counts(counts: impl IntoIterator<Item = (String, usize)>) -> Self {
        let mut v: Vec<(String, usize)> = counts.into_iter().collect();
        v.sort_by(|a, b| b.1.cmp(&a.1).then_with(|| a.0.cmp(&b.0)));
        ClassDistribution(v)
    }

    pub fn get(&self, label: &str) -> Option<usize> {
        self.0.iter().find(|(l, _)| l == label).map(|(_, c)| *c)
    }

    pub fn counts(&self) -> Vec<usize> {
        self.0.iter().map(|(_, c)| *c).collect()
    }

    pub fn total(&self) -> usize {
        self.0.iter().map(|(_, c)| c).sum()
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = (&str, usize)> {
        self.0.iter().map(|(l, c)| (l.as_str(), *c))
    }
}

pub fn class_distribution(ds: &ClassificationDataset, field: Field) -> Result<ClassDistribution> {
    if ds.is_empty() {
        return Err(Error::EmptyInput("dataset has no projects".into()));
    }
    let mut counts: HashMap<&str, usize> = HashMap::new();
    for p in &ds.projects {
        for l in p.annotations(field) {
            *counts.entry(l).or_default() += 1;
        }
    }
    Ok(ClassDistribution::from_counts(
        counts.into_iter().map(|(l, c)| (l.to_string(), c)),
    ))
}

#[cfg(test)]
mod tests {
    use super::*;

    const SMALL: &str = "project.name,category\nclap,CLI\naxum,Web\n";

    #[test]
    fn parses_minimal_schema() {
        let ds = parse_dataset(SMALL.as_bytes(), Arity::SingleLabel).unwrap();
        assert_eq!(ds.len(), 2);
        assert_eq!(ds.label_universe(Field::Label), vec!["CLI", "Web"]);
        assert_eq!(ds.projects[0].annotations(Field::Label), vec!["CLI"]);
    }

    #[test]
    fn missing_category_column() {
        let err = parse_dataset(b"project.name,label\nx,A\n", Arity::SingleLabel).unwrap_err();
        assert!(matches!(err, Error::MissingColumn(c) if c == "category"));
    }

    #[test]
    fn empty_inputs() {
        assert!(matches!(
            parse_dataset(b"", Arity::SingleLabel),
            Err(Error::EmptyInput(_))
        ));
        assert!(matches!(
            parse_dataset(b"project.name,category\n", Arity::SingleLabel),
            Err(Error::EmptyInput(_))
        ));
    }

    #[test]
    fn duplicate_rows_are_reported_with_lines() {
        let csv = "project.name,category\na,X\nb,X\na,X\n";
        match parse_dataset(csv.as_bytes(), Arity::SingleLabel) {
            Err(Error::Validation(r)) => {
                assert_eq!(r.errors.len(), 1);
                assert!(r.errors[0].message.contains("lines 2, 4"), "{}", r);
            }
            other => panic!("expected validation error, got {other:?}"),
        }
    }

    #[test]
    fn whitespace_trimmed_and_case_kept() {
        let csv = "project.name , category,label\n  a , web , Web \n";
        let ds = parse_dataset(csv.as_bytes(), Arity::SingleLabel).unwrap();
        assert_eq!(ds.projects[0].name, "a");
        assert_eq!(ds.projects[0].original_category, "web");
        assert_eq!(ds.projects[0].labels, vec!["Web"]);
    }

    #[test]
    fn multi_label_cells() {
        let csv = "project.name,category,label\na,X,A|B\nb,Y,\n";
        let ds = parse_dataset(csv.as_bytes(), Arity::MultiLabel).unwrap();
        assert_eq!(ds.projects[0].annotations(Field::Label), vec!["A", "B"]);
        assert_eq!(ds.projects[1].annotations(Field::Label), vec!["Y"]);
        assert_eq!(ds.annotation_count(Field::Label), 3);
    }

    #[test]
    fn pipe_in_single_label_is_an_error() {
        let csv = "project.name,category,label\na,X,A|B\n";
        assert!(matches!(
            parse_dataset(csv.as_bytes(), Arity::SingleLabel),
            Err(Error::Validation(_))
        ));
    }

    #[test]
    fn extra_columns_survive_round_trip() {
        let csv = "stars,project.name,category\n10,a,X\n20,b,Y\n";
        let (ds, report) = load_dataset(csv.as_bytes(), Arity::SingleLabel).unwrap();
        assert_eq!(ds.extra_columns, vec!["stars"]);
        assert_eq!(report.warnings.len(), 1);
        let out = ds.to_csv().unwrap();
        let again = parse_dataset(&out, Arity::SingleLabel).unwrap();
        assert_eq!(again, ds);
    }

    #[test]
    fn distribution_ordering() {
        let csv = "project.name,category\na,B\nb,A\nc,A\nd,C\n";
        let ds = parse_dataset(csv.as_bytes(), Arity::SingleLabel).unwrap();
        let d = class_distribution(&ds, Field::Label).unwrap();
        assert_eq!(
            d.0,
            vec![("A".to_string(), 2), ("B".to_string(), 1), ("C".to_string(), 1)]
        );
        assert_eq!(d.total(), 4);
    }

    #[test]
    fn single_project_distribution() {
        let ds = ClassificationDataset::new(vec![Project::new("p", "X")], Arity::SingleLabel);
        let d = class_distribution(&ds, Field::OriginalCategory).unwrap();
        assert_eq!(d.0, vec![("X".to_string(), 1)]);
        assert!(class_distribution(&ClassificationDataset::default(), Field::Label).is_err());
    }
}
