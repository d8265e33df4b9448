//! Hierarchical label reduction, before/after comparison and majority
//! aggregation of taxonomy-level ratings.

use std::collections::{BTreeMap, BTreeSet, HashSet};
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::dataset::{class_distribution, ClassificationDataset, Field};
use crate::error::{Error, Result};
use crate::lint::AntipatternSummary;
use crate::metrics::DatasetSummary;
use crate::similarity::MeanStd;
use crate::vectorize::VectorizeConfig;

/// `original -> intermediates... -> final`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct MappingPath {
    pub original: String,
    pub intermediates: Vec<String>,
    pub final_label: String,
}

impl MappingPath {
    pub fn new(original: impl Into<String>, chain: Vec<String>) -> Result<Self> {
        let original = original.into();
        let mut chain: Vec<String> = chain
            .into_iter()
            .map(|s| s.trim().to_string())
            .filter(|s| !s.is_empty())
            .collect();
        if chain.len() > 1 && chain[0] == original {
            chain.remove(0);
        }
        let Some(final_label) = chain.pop() else {
            return Err(Error::MappingPath {
                original,
                message: "empty path".into(),
            });
        };
        let path = MappingPath {
            original,
            intermediates: chain,
            final_label,
        };
        path.validate()?;
        Ok(path)
    }

    fn validate(&self) -> Result<()> {
        let identity = self.intermediates.is_empty() && self.final_label == self.original;
        if identity {
            return Ok(());
        }
        let mut seen = HashSet::new();
        for node in self.nodes() {
            if !seen.insert(node) {
                return Err(Error::MappingPath {
                    original: self.original.clone(),
                    message: format!("`{node}` appears twice along the path"),
                });
            }
        }
        Ok(())
    }

    pub fn nodes(&self) -> impl Iterator<Item = &str> {
        std::iter::once(self.original.as_str())
            .chain(self.intermediates.iter().map(String::as_str))
            .chain(std::iter::once(self.final_label.as_str()))
    }

    pub fn is_identity(&self) -> bool {
        self.intermediates.is_empty() && self.final_label == self.original
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Default, Serialize, Deserialize)]
pub struct LabelMapping {
    entries: BTreeMap<String, MappingPath>,
    /// Final labels in order of first appearance.
    final_universe: Vec<String>,
}

impl LabelMapping {
    pub fn from_paths(paths: impl IntoIterator<Item = MappingPath>) -> Result<Self> {
        let mut m = LabelMapping::default();
        for p in paths {
            if m.entries.contains_key(&p.original) {
                return Err(Error::MappingConflict(p.original));
            }
            if !m.final_universe.contains(&p.final_label) {
                m.final_universe.push(p.final_label.clone());
            }
            m.entries.insert(p.original.clone(), p);
        }
        Ok(m)
    }

    pub fn get(&self, original: &str) -> Option<&MappingPath> {
        self.entries.get(original)
    }

    pub fn paths(&self) -> impl Iterator<Item = &MappingPath> {
        self.entries.values()
    }

    pub fn final_universe(&self) -> &[String] {
        &self.final_universe
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    /// Mapping equivalent to applying `self` and then `next` to the results.
    /// Labels `next` does not mention keep their `self` path.
    pub fn compose(&self, next: &LabelMapping) -> Result<LabelMapping> {
        LabelMapping::from_paths(self.paths().cloned().map(|p| {
            match next.get(&p.final_label) {
                None => Ok(p),
                Some(q) if q.is_identity() => Ok(p),
                Some(q) => {
                    let mut chain: Vec<String> = p.intermediates.clone();
                    if p.final_label != p.original {
                        chain.push(p.final_label.clone());
                    }
                    chain.extend(q.intermediates.iter().cloned());
                    chain.push(q.final_label.clone());
                    MappingPath::new(p.original, chain)
                }
            }
        }).collect::<Result<Vec<_>>>()?)
    }
}

fn split_chain(path: &str) -> Vec<String> {
    path.split(['>', '→']).map(|s| s.trim().to_string()).collect()
}

/// Parses a `original,path` CSV where the path is a `>`- or `→`-separated
/// chain ending in the final label.
pub fn parse_mapping(bytes: &[u8]) -> Result<LabelMapping> {
    let mut rdr = csv::ReaderBuilder::new()
        .trim(csv::Trim::All)
        .from_reader(bytes);
    let headers = rdr.headers()?.clone();
    let col = |name: &str| {
        headers
            .iter()
            .position(|h| h == name)
            .ok_or_else(|| Error::MissingColumn(name.into()))
    };
    let (orig_ix, path_ix) = (col("original")?, col("path")?);
    let mut paths = Vec::new();
    for rec in rdr.records() {
        let rec = rec?;
        let line = rec.position().map(|p| p.line() as usize).unwrap_or(0);
        let original = rec.get(orig_ix).unwrap_or("").to_string();
        if original.is_empty() {
            return Err(Error::Format {
                line,
                message: "empty original label".into(),
            });
        }
        let path = rec.get(path_ix).unwrap_or("");
        if path.is_empty() {
            return Err(Error::Format {
                line,
                message: format!("empty path for `{original}`"),
            });
        }
        paths.push(MappingPath::new(original, split_chain(path))?);
    }
    if paths.is_empty() {
        return Err(Error::EmptyInput("mapping has no rows".into()));
    }
    LabelMapping::from_paths(paths)
}

pub fn load_mapping(path: &Path) -> Result<LabelMapping> {
    let bytes = std::fs::read(path).map_err(|e| Error::io(path, e))?;
    parse_mapping(&bytes)
}

/// Relabels every project with the final label of its original category.
pub fn apply_mapping(ds: &ClassificationDataset, m: &LabelMapping) -> Result<ClassificationDataset> {
    apply_mapping_from(ds, m, Field::OriginalCategory)
}

/// Like [`apply_mapping`], but maps the annotations of `source` (use
/// [`Field::Label`] to reduce an already reduced dataset further).
pub fn apply_mapping_from(
    ds: &ClassificationDataset,
    m: &LabelMapping,
    source: Field,
) -> Result<ClassificationDataset> {
    let missing: BTreeSet<&str> = ds
        .projects
        .iter()
        .flat_map(|p| p.annotations(source))
        .filter(|l| m.get(l).is_none())
        .collect();
    if !missing.is_empty() {
        return Err(Error::MappingCoverage(missing.into_iter().map(str::to_string).collect()));
    }
    let mut out = ds.clone();
    for p in &mut out.projects {
        let mut labels: Vec<String> = Vec::new();
        for l in p.annotations(source) {
            let f = &m.get(l).expect("coverage checked").final_label;
            if !labels.contains(f) {
                labels.push(f.clone());
            }
        }
        p.labels = labels;
    }
    Ok(out)
}

/// Which originals ended up in each final label, with project counts.
pub fn provenance(reduced: &ClassificationDataset) -> BTreeMap<String, BTreeMap<String, usize>> {
    let mut out: BTreeMap<String, BTreeMap<String, usize>> = BTreeMap::new();
    for p in &reduced.projects {
        for l in p.annotations(Field::Label) {
            *out.entry(l.to_string())
                .or_default()
                .entry(p.original_category.clone())
                .or_default() += 1;
        }
    }
    out
}

/// Analysis results of one side of a comparison.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SideAnalysis {
    pub summary: DatasetSummary,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub similarity: Option<MeanStd>,
    pub antipatterns: AntipatternSummary,
    pub vectorize_config: VectorizeConfig,
    pub lint_fingerprint: String,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SummaryDelta {
    pub examples: i64,
    pub categories: i64,
    pub balance: f64,
    pub min: i64,
    pub max: i64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ComparisonReport {
    pub before: SideAnalysis,
    pub after: SideAnalysis,
    pub summary_delta: SummaryDelta,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub similarity_delta: Option<MeanStd>,
    /// Final label -> original category -> project count.
    pub provenance: BTreeMap<String, BTreeMap<String, usize>>,
}

pub fn compare(
    before: &SideAnalysis,
    after: &SideAnalysis,
    reduced: &ClassificationDataset,
) -> Result<ComparisonReport> {
    if before.vectorize_config != after.vectorize_config {
        return Err(Error::NotComparable("vectorize configs differ".into()));
    }
    if before.lint_fingerprint != after.lint_fingerprint {
        return Err(Error::NotComparable("lint configs differ".into()));
    }
    let provenance = provenance(reduced);
    let prov_total: usize = provenance.values().flat_map(|m| m.values()).sum();
    let after_total = class_distribution(reduced, Field::Label)?.total();
    debug_assert_eq!(prov_total, after_total);

    let d = |a: usize, b: usize| b as i64 - a as i64;
    let (b, a) = (&before.summary, &after.summary);
    let similarity_delta = match (before.similarity, after.similarity) {
        (Some(x), Some(y)) => Some(MeanStd {
            mean: y.mean - x.mean,
            std: y.std - x.std,
        }),
        _ => None,
    };
    Ok(ComparisonReport {
        before: before.clone(),
        after: after.clone(),
        summary_delta: SummaryDelta {
            examples: d(b.examples, a.examples),
            categories: d(b.categories, a.categories),
            balance: a.balance - b.balance,
            min: d(b.min, a.min),
            max: d(b.max, a.max),
        },
        similarity_delta,
        provenance,
    })
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct LevelRating {
    pub label: String,
    pub annotator: String,
    pub level: u8,
}

impl LevelRating {
    pub fn new(label: impl Into<String>, annotator: impl Into<String>, level: u8) -> Result<Self> {
        if !(1..=5).contains(&level) {
            return Err(Error::Format {
                line: 0,
                message: format!("level {level} outside 1..=5"),
            });
        }
        Ok(LevelRating {
            label: label.into(),
            annotator: annotator.into(),
            level,
        })
    }
}

pub fn parse_ratings(bytes: &[u8]) -> Result<Vec<LevelRating>> {
    #[derive(Deserialize)]
    struct Row {
        label: String,
        annotator: String,
        level: u8,
    }
    let mut rdr = csv::ReaderBuilder::new().trim(csv::Trim::All).from_reader(bytes);
    let mut out = Vec::new();
    for row in rdr.deserialize::<Row>() {
        let row = row?;
        out.push(LevelRating::new(row.label, row.annotator, row.level)?);
    }
    Ok(out)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum MajorityRule {
    /// More than half of the ratings.
    #[default]
    Strict,
    /// The single most frequent level.
    Plurality,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum LevelOutcome {
    Level(u8),
    NoMajority,
}

pub fn aggregate_levels(ratings: &[LevelRating], rule: MajorityRule) -> BTreeMap<String, LevelOutcome> {
    let mut per_label: BTreeMap<&str, [usize; 6]> = BTreeMap::new();
    for r in ratings {
        per_label.entry(&r.label).or_default()[r.level as usize] += 1;
    }
    per_label
        .into_iter()
        .map(|(label, counts)| {
            let total: usize = counts.iter().sum();
            let best = counts.iter().copied().max().unwrap_or(0);
            let winners: Vec<u8> = (1..=5u8).filter(|&l| counts[l as usize] == best).collect();
            let outcome = match rule {
                MajorityRule::Strict if 2 * best > total => LevelOutcome::Level(winners[0]),
                MajorityRule::Plurality if winners.len() == 1 => LevelOutcome::Level(winners[0]),
                _ => LevelOutcome::NoMajority,
            };
            (label.to_string(), outcome)
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dataset::{Arity, Project};

    fn ratings(levels: &[u8]) -> Vec<LevelRating> {
        levels
            .iter()
            .enumerate()
            .map(|(i, &l)| LevelRating::new("X", format!("a{i}"), l).unwrap())
            .collect()
    }

    #[test]
    fn parses_hierarchical_rows() {
        let m = parse_mapping("original,path\nNLP,AI > STEM\nCLI,CLI\nCV,AI → STEM\n".as_bytes()).unwrap();
        let p = m.get("NLP").unwrap();
        assert_eq!(p.intermediates, vec!["AI"]);
        assert_eq!(p.final_label, "STEM");
        assert!(m.get("CLI").unwrap().is_identity());
        assert_eq!(m.get("CV").unwrap().final_label, "STEM");
        assert_eq!(m.final_universe(), &["STEM".to_string(), "CLI".to_string()]);
    }

    #[test]
    fn mapping_errors() {
        assert!(matches!(
            parse_mapping(b"original,path\nNLP,AI > STEM\nNLP,STEM\n"),
            Err(Error::MappingConflict(l)) if l == "NLP"
        ));
        assert!(matches!(
            parse_mapping(b"original,path\nNLP,\n"),
            Err(Error::Format { .. })
        ));
        assert!(matches!(
            parse_mapping(b"original,path\nNLP,AI > NLP\n"),
            Err(Error::MappingPath { .. })
        ));
        assert!(parse_mapping(b"original,path\nNLP, > \n").is_err());
    }

    #[test]
    fn leading_original_is_dropped() {
        let p = MappingPath::new("NLP", vec!["NLP".into(), "AI".into(), "STEM".into()]).unwrap();
        assert_eq!(p.intermediates, vec!["AI"]);
    }

    #[test]
    fn coverage_error_lists_all_missing() {
        let ds = ClassificationDataset::new(
            vec![
                Project::new("a", "Bean Mapping"),
                Project::new("b", "CLI"),
                Project::new("c", "Zeta"),
            ],
            Arity::SingleLabel,
        );
        let m = parse_mapping(b"original,path\nCLI,CLI\n").unwrap();
        match apply_mapping(&ds, &m) {
            Err(Error::MappingCoverage(missing)) => assert_eq!(missing, vec!["Bean Mapping", "Zeta"]),
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn identity_mapping_keeps_labels() {
        let ds = ClassificationDataset::new(
            vec![Project::new("a", "X").with_labels(["X"]), Project::new("b", "Y").with_labels(["Y"])],
            Arity::SingleLabel,
        );
        let m = parse_mapping(b"original,path\nX,X\nY,Y\n").unwrap();
        assert_eq!(apply_mapping(&ds, &m).unwrap(), ds);
    }

    #[test]
    fn compose_concatenates_paths() {
        let m1 = parse_mapping(b"original,path\nNLP,AI\nCLI,CLI\n").unwrap();
        let m2 = parse_mapping(b"original,path\nAI,STEM\nCLI,Tools\n").unwrap();
        let c = m1.compose(&m2).unwrap();
        let p = c.get("NLP").unwrap();
        assert_eq!((p.intermediates.clone(), p.final_label.as_str()), (vec!["AI".to_string()], "STEM"));
        assert_eq!(c.get("CLI").unwrap().final_label, "Tools");
        assert!(c.get("CLI").unwrap().intermediates.is_empty());
    }

    #[test]
    fn majority_examples() {
        let strict = |l: &[u8]| aggregate_levels(&ratings(l), MajorityRule::Strict)["X"];
        assert_eq!(strict(&[1, 1, 1, 2, 5]), LevelOutcome::Level(1));
        assert_eq!(strict(&[2, 3, 2, 3]), LevelOutcome::NoMajority);
        assert_eq!(strict(&[4, 4, 4, 4, 4]), LevelOutcome::Level(4));
        assert_eq!(strict(&[1, 1, 2, 3, 4]), LevelOutcome::NoMajority);
        let plural = aggregate_levels(&ratings(&[1, 1, 2, 3, 4]), MajorityRule::Plurality)["X"];
        assert_eq!(plural, LevelOutcome::Level(1));
    }

    #[test]
    fn rating_bounds_and_csv() {
        assert!(LevelRating::new("X", "a", 0).is_err());
        assert!(LevelRating::new("X", "a", 6).is_err());
        let r = parse_ratings(b"label,annotator,level\nWeb,ann1,2\nWeb,ann2,2\n").unwrap();
        assert_eq!(r.len(), 2);
        assert!(parse_ratings(b"label,annotator,level\nWeb,ann1,9\n").is_err());
    }
}
