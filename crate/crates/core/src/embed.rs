//! Pre-trained word vectors and label-level similarity.
//!
//! Vector files use the common text release format: an optional
//! `count dimension` header followed by one `word v1 ... vd` row per word.
//! A label is embedded as the mean of the L2-normalized vectors of its words;
//! words missing from the table are dropped and reported.

use std::collections::{HashMap, HashSet};
use std::fs::File;
use std::io::{BufRead, BufReader};
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::similarity::{cosine, MatrixKind, SimilarityMatrix};

#[derive(Debug, Clone)]
pub struct EmbeddingTable {
    dimension: usize,
    words: Vec<String>,
    index: HashMap<String, usize>,
    data: Vec<f32>,
}

/// Result of loading a vector file.
#[derive(Debug, Clone)]
pub struct LoadedEmbeddings {
    pub table: EmbeddingTable,
    pub warnings: Vec<String>,
}

impl EmbeddingTable {
    /// Builds a table from in-memory rows; all rows must share one dimension.
    pub fn from_rows<I, S>(rows: I) -> Result<Self>
    where
        I: IntoIterator<Item = (S, Vec<f64>)>,
        S: Into<String>,
    {
        let mut table: Option<EmbeddingTable> = None;
        for (i, (word, v)) in rows.into_iter().enumerate() {
            let t = table.get_or_insert_with(|| EmbeddingTable::empty(v.len()));
            if v.len() != t.dimension || v.is_empty() {
                return Err(Error::Format {
                    line: i + 1,
                    message: format!("expected {} components, found {}", t.dimension, v.len()),
                });
            }
            let word = word.into();
            if !t.index.contains_key(&word) {
                t.push(word, v.iter().map(|&x| x as f32));
            }
        }
        table.ok_or_else(|| Error::EmptyInput("no embedding rows".into()))
    }

    fn empty(dimension: usize) -> Self {
        EmbeddingTable {
            dimension,
            words: Vec::new(),
            index: HashMap::new(),
            data: Vec::new(),
        }
    }

    fn push(&mut self, word: String, v: impl Iterator<Item = f32>) {
        self.index.insert(word.clone(), self.words.len());
        self.words.push(word);
        self.data.extend(v);
    }

    pub fn dimension(&self) -> usize {
        self.dimension
    }

    pub fn vocabulary_size(&self) -> usize {
        self.words.len()
    }

    pub fn contains(&self, word: &str) -> bool {
        self.index.contains_key(word)
    }

    pub fn get(&self, word: &str) -> Option<Vec<f64>> {
        let i = *self.index.get(word)?;
        let d = self.dimension;
        Some(self.data[i * d..(i + 1) * d].iter().map(|&x| x as f64).collect())
    }
}

/// Loads every row of a vector file.
pub fn load_embeddings(path: &Path) -> Result<LoadedEmbeddings> {
    load_embeddings_filtered(path, None)
}

/// Loads a vector file, keeping only the words in `keep` when given. Every row
/// is still checked for a consistent dimension.
pub fn load_embeddings_filtered(
    path: &Path,
    keep: Option<&HashSet<String>>,
) -> Result<LoadedEmbeddings> {
    let file = File::open(path).map_err(|e| Error::io(path, e))?;
    read_embeddings(BufReader::new(file), keep).map_err(|e| match e {
        Error::Io { source, .. } => Error::io(path, source),
        other => other,
    })
}

pub fn read_embeddings<R: BufRead>(
    reader: R,
    keep: Option<&HashSet<String>>,
) -> Result<LoadedEmbeddings> {
    let mut table: Option<EmbeddingTable> = None;
    let mut header: Option<(usize, usize)> = None;
    let mut rows = 0usize;
    let mut warnings = Vec::new();

    for (i, line) in reader.lines().enumerate() {
        let line_no = i + 1;
        let line = line.map_err(|e| Error::io("<embeddings>", e))?;
        let line = line.trim_end();
        if line.is_empty() {
            continue;
        }
        let mut parts = line.split(' ').filter(|s| !s.is_empty());
        let Some(word) = parts.next() else { continue };
        let rest: Vec<&str> = parts.collect();

        if line_no == 1 && rest.len() == 1 {
            if let (Ok(count), Ok(dim)) = (word.parse::<usize>(), rest[0].parse::<usize>()) {
                if dim == 0 {
                    return Err(Error::Format {
                        line: 1,
                        message: "header declares dimension 0".into(),
                    });
                }
                header = Some((count, dim));
                table = Some(EmbeddingTable::empty(dim));
                continue;
            }
        }

        let t = table.get_or_insert_with(|| EmbeddingTable::empty(rest.len()));
        if rest.len() != t.dimension || rest.is_empty() {
            return Err(Error::Format {
                line: line_no,
                message: format!("expected {} components, found {}", t.dimension, rest.len()),
            });
        }
        rows += 1;
        if keep.is_some_and(|k| !k.contains(word)) {
            continue;
        }
        if t.index.contains_key(word) {
            warnings.push(format!(
                "line {line_no}: duplicate word `{word}`, keeping first occurrence"
            ));
            continue;
        }
        let values = rest
            .iter()
            .map(|s| {
                s.parse::<f32>().map_err(|_| Error::Format {
                    line: line_no,
                    message: format!("invalid component `{s}`"),
                })
            })
            .collect::<Result<Vec<f32>>>()?;
        t.push(word.to_string(), values.into_iter());
    }

    if rows == 0 {
        return Err(Error::EmptyInput("embedding file has no vectors".into()));
    }
    if let Some((count, _)) = header {
        if count != rows {
            warnings.push(format!("header declares {count} words, file has {rows}"));
        }
    }
    let table = table.expect("rows > 0 implies a table");
    Ok(LoadedEmbeddings { table, warnings })
}

/// Lowercased words of a label, split on whitespace, `-`, `/` and `_`.
pub fn label_words(label: &str) -> Vec<String> {
    label
        .to_lowercase()
        .split(|c: char| c.is_whitespace() || matches!(c, '-' | '/' | '_'))
        .filter(|w| !w.is_empty())
        .map(str::to_string)
        .collect()
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LabelVector {
    pub label: String,
    pub vector: Vec<f64>,
    pub oov_words: Vec<String>,
}

impl LabelVector {
    /// False when none of the label's words had a usable vector.
    pub fn is_embeddable(&self) -> bool {
        self.vector.iter().any(|&x| x != 0.0)
    }
}

pub fn embed_label(label: &str, table: &EmbeddingTable) -> Result<LabelVector> {
    let words = label_words(label);
    if words.is_empty() {
        return Err(Error::EmptyInput("empty label".into()));
    }
    let d = table.dimension();
    let mut acc = vec![0.0; d];
    let mut used = 0usize;
    let mut oov = Vec::new();
    for w in words {
        match table.get(&w) {
            Some(v) => {
                let norm = v.iter().map(|x| x * x).sum::<f64>().sqrt();
                if norm == 0.0 {
                    oov.push(w);
                    continue;
                }
                for (a, x) in acc.iter_mut().zip(&v) {
                    *a += x / norm;
                }
                used += 1;
            }
            None => oov.push(w),
        }
    }
    if used > 0 {
        for a in &mut acc {
            *a /= used as f64;
        }
    }
    Ok(LabelVector {
        label: label.to_string(),
        vector: acc,
        oov_words: oov,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LabelSimilarity {
    pub matrix: SimilarityMatrix,
    pub vectors: Vec<LabelVector>,
    /// Labels left out of the matrix because no word was in the table.
    pub unembeddable: Vec<String>,
}

impl LabelSimilarity {
    /// Embeddable labels that had at least one out-of-vocabulary word.
    pub fn partially_embedded(&self) -> Vec<&LabelVector> {
        self.vectors.iter().filter(|v| !v.oov_words.is_empty()).collect()
    }
}

/// Cosine similarity between every pair of embeddable labels.
pub fn similarity_from_vectors(vectors: &[LabelVector]) -> Result<SimilarityMatrix> {
    let m = vectors.len();
    let mut values = vec![vec![0.0; m]; m];
    for i in 0..m {
        values[i][i] = 1.0;
        for j in (i + 1)..m {
            let s = cosine(&vectors[i].vector, &vectors[j].vector);
            values[i][j] = s;
            values[j][i] = s;
        }
    }
    SimilarityMatrix::new(
        vectors.iter().map(|v| v.label.clone()).collect(),
        values,
        MatrixKind::Label,
    )
}

pub fn label_similarity_matrix(labels: &[String], table: &EmbeddingTable) -> Result<LabelSimilarity> {
    let mut vectors = Vec::new();
    let mut unembeddable = Vec::new();
    for l in labels {
        let v = embed_label(l, table)?;
        if v.is_embeddable() {
            vectors.push(v);
        } else {
            unembeddable.push(l.clone());
        }
    }
    if vectors.len() < 2 {
        return Err(Error::InsufficientInput(format!(
            "need at least 2 embeddable labels, found {}",
            vectors.len()
        )));
    }
    let matrix = similarity_from_vectors(&vectors)?;
    Ok(LabelSimilarity {
        matrix,
        vectors,
        unembeddable,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn table(rows: &[(&str, &[f64])]) -> EmbeddingTable {
        EmbeddingTable::from_rows(rows.iter().map(|(w, v)| (*w, v.to_vec()))).unwrap()
    }

    #[test]
    fn reads_plain_rows() {
        let text = "a 1 0 0 0\nb 0 1 0 0\nc 0 0 1 0\n";
        let t = read_embeddings(text.as_bytes(), None).unwrap().table;
        assert_eq!((t.vocabulary_size(), t.dimension()), (3, 4));
    }

    #[test]
    fn reads_header() {
        let text = "2 3\nx 1 2 3\ny 4 5 6\n";
        let loaded = read_embeddings(text.as_bytes(), None).unwrap();
        assert_eq!(loaded.table.dimension(), 3);
        assert!(loaded.warnings.is_empty());
    }

    #[test]
    fn short_row_is_a_format_error() {
        let text = "x 1 2 3\ny 4 5\n";
        match read_embeddings(text.as_bytes(), None) {
            Err(Error::Format { line, .. }) => assert_eq!(line, 2),
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn empty_file() {
        assert!(matches!(
            read_embeddings("".as_bytes(), None),
            Err(Error::EmptyInput(_))
        ));
    }

    #[test]
    fn duplicate_words_keep_first() {
        let text = "x 1 0\nx 0 1\n";
        let loaded = read_embeddings(text.as_bytes(), None).unwrap();
        assert_eq!(loaded.table.get("x").unwrap(), vec![1.0, 0.0]);
        assert_eq!(loaded.warnings.len(), 1);
    }

    #[test]
    fn filtered_load_still_checks_dimensions() {
        let keep: HashSet<String> = ["y".to_string()].into();
        let ok = read_embeddings("x 1 0\ny 0 1\n".as_bytes(), Some(&keep)).unwrap();
        assert_eq!(ok.table.vocabulary_size(), 1);
        assert!(read_embeddings("x 1 0\ny 0\n".as_bytes(), Some(&keep)).is_err());
    }

    #[test]
    fn single_word_label_is_normalized() {
        let t = table(&[("nlp", &[3.0, 4.0])]);
        let v = embed_label("NLP", &t).unwrap();
        assert_eq!(v.vector, vec![0.6, 0.8]);
    }

    #[test]
    fn oov_words_are_excluded() {
        let t = table(&[("development", &[0.0, 2.0])]);
        let v = embed_label("Zzqx Development", &t).unwrap();
        assert_eq!(v.vector, vec![0.0, 1.0]);
        assert_eq!(v.oov_words, vec!["zzqx"]);
        assert!(v.is_embeddable());
        assert!(!embed_label("zzqx", &t).unwrap().is_embeddable());
        assert!(embed_label("  ", &t).is_err());
    }

    #[test]
    fn orthogonal_labels() {
        let t = table(&[("alpha", &[1.0, 0.0]), ("beta", &[0.0, 1.0])]);
        let s = label_similarity_matrix(&["alpha".into(), "beta".into()], &t).unwrap();
        assert_eq!(s.matrix.get("alpha", "beta"), Some(0.0));
    }

    #[test]
    fn identical_labels() {
        let t = table(&[("web", &[0.3, 0.1])]);
        let s = label_similarity_matrix(&["Web".into(), "web".into()], &t).unwrap();
        assert!((s.matrix.values()[0][1] - 1.0).abs() < 1e-12);
    }

    #[test]
    fn too_few_embeddable_labels() {
        let t = table(&[("web", &[0.3, 0.1])]);
        let err = label_similarity_matrix(&["Web".into(), "Zzqx".into()], &t).unwrap_err();
        assert!(matches!(err, Error::InsufficientInput(_)));
    }

    #[test]
    fn label_splitting() {
        assert_eq!(label_words("Date/Time"), vec!["date", "time"]);
        assert_eq!(label_words("Deep-Learning  tools_x"), vec!["deep", "learning", "tools", "x"]);
    }
}
