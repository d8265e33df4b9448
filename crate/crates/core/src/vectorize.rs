//! TFIDF vectors of category documents and category-by-category cosine
//! similarity.

use std::collections::{BTreeMap, HashMap};
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::corpus::TermDocument;
use crate::error::{Error, Result};
use crate::similarity::{MatrixKind, SimilarityMatrix};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum IdfVariant {
    /// `ln((1 + N) / (1 + df)) + 1`
    #[default]
    Smooth,
    /// `ln(N / df)`
    Classic,
}

impl IdfVariant {
    pub fn idf(self, n_docs: usize, df: usize) -> f64 {
        let (n, df) = (n_docs as f64, df as f64);
        match self {
            IdfVariant::Smooth => ((1.0 + n) / (1.0 + df)).ln() + 1.0,
            IdfVariant::Classic => (n / df).ln(),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct VectorizeConfig {
    /// Terms are kept only when `df / N` is strictly below this ratio.
    pub max_df: f64,
    pub top_k: usize,
    pub idf: IdfVariant,
}

impl Default for VectorizeConfig {
    fn default() -> Self {
        VectorizeConfig {
            max_df: 0.8,
            top_k: 1000,
            idf: IdfVariant::Smooth,
        }
    }
}

impl VectorizeConfig {
    pub fn validate(&self) -> Result<()> {
        if !(self.max_df > 0.0 && self.max_df <= 1.0) {
            return Err(Error::Config(format!("max_df must be in (0, 1], got {}", self.max_df)));
        }
        if self.top_k == 0 {
            return Err(Error::Config("top_k must be at least 1".into()));
        }
        Ok(())
    }

    pub fn from_toml(text: &str) -> Result<Self> {
        let cfg: VectorizeConfig =
            toml::from_str(text).map_err(|e| Error::Config(format!("vectorize config: {e}")))?;
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        Self::from_toml(&text)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Vocabulary {
    pub terms: Vec<String>,
    pub df: BTreeMap<String, usize>,
    pub n_docs: usize,
}

impl Vocabulary {
    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }
}

/// Keeps terms whose document frequency ratio is below `max_df`, then the
/// `top_k` most frequent of those across the whole collection (ties broken
/// lexicographically).
pub fn build_vocabulary(docs: &[TermDocument], cfg: &VectorizeConfig) -> Result<Vocabulary> {
    cfg.validate()?;
    if docs.len() < 2 {
        return Err(Error::InsufficientInput(format!(
            "need at least 2 documents, got {}",
            docs.len()
        )));
    }
    let n = docs.len();
    let mut df: HashMap<&str, usize> = HashMap::new();
    let mut total: HashMap<&str, u64> = HashMap::new();
    for d in docs {
        for (t, &c) in &d.term_counts {
            if c == 0 {
                continue;
            }
            *df.entry(t).or_default() += 1;
            *total.entry(t).or_default() += c;
        }
    }

    let mut ranked: Vec<(&str, u64)> = total
        .into_iter()
        .filter(|(t, _)| (df[t] as f64 / n as f64) < cfg.max_df)
        .collect();
    if ranked.is_empty() {
        return Err(Error::DegenerateCorpus(format!(
            "no term has a document frequency below {}",
            cfg.max_df
        )));
    }
    ranked.sort_by(|a, b| b.1.cmp(&a.1).then_with(|| a.0.cmp(b.0)));
    ranked.truncate(cfg.top_k);

    let terms: Vec<String> = ranked.iter().map(|(t, _)| t.to_string()).collect();
    let df = terms.iter().map(|t| (t.clone(), df[t.as_str()])).collect();
    Ok(Vocabulary {
        terms,
        df,
        n_docs: n,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TfidfMatrix {
    pub labels: Vec<String>,
    pub vocabulary: Vocabulary,
    pub idf: IdfVariant,
    /// One L2-normalized row per document.
    pub weights: Vec<Vec<f64>>,
    /// Documents without any in-vocabulary term; their rows are zero.
    pub zero_rows: Vec<String>,
}

pub fn tfidf_vectors(docs: &[TermDocument], vocab: &Vocabulary, idf: IdfVariant) -> Result<TfidfMatrix> {
    if docs.len() != vocab.n_docs {
        return Err(Error::InsufficientInput(format!(
            "vocabulary was built from {} documents, got {}",
            vocab.n_docs,
            docs.len()
        )));
    }
    let idf_values: Vec<f64> = vocab
        .terms
        .iter()
        .map(|t| idf.idf(vocab.n_docs, vocab.df[t]))
        .collect();

    let mut weights = Vec::with_capacity(docs.len());
    let mut zero_rows = Vec::new();
    for d in docs {
        let mut row: Vec<f64> = vocab
            .terms
            .iter()
            .zip(&idf_values)
            .map(|(t, w)| d.count(t) as f64 * w)
            .collect();
        let norm = row.iter().map(|x| x * x).sum::<f64>().sqrt();
        if norm > 0.0 {
            row.iter_mut().for_each(|x| *x /= norm);
        } else {
            zero_rows.push(d.label.clone());
        }
        weights.push(row);
    }
    Ok(TfidfMatrix {
        labels: docs.iter().map(|d| d.label.clone()).collect(),
        vocabulary: vocab.clone(),
        idf,
        weights,
        zero_rows,
    })
}

/// Builds the vocabulary and TFIDF rows in one step.
pub fn vectorize(docs: &[TermDocument], cfg: &VectorizeConfig) -> Result<TfidfMatrix> {
    let vocab = build_vocabulary(docs, cfg)?;
    tfidf_vectors(docs, &vocab, cfg.idf)
}

/// Cosine similarity between all rows, with per-category mean and max
/// summary rows. Zero rows are similar to nothing, themselves included.
pub fn category_similarity_matrix(m: &TfidfMatrix) -> Result<SimilarityMatrix> {
    let n = m.weights.len();
    if n < 2 {
        return Err(Error::InsufficientInput(format!(
            "need at least 2 categories, got {n}"
        )));
    }
    let nonzero: Vec<bool> = m.labels.iter().map(|l| !m.zero_rows.contains(l)).collect();
    let mut values = vec![vec![0.0; n]; n];
    for i in 0..n {
        if nonzero[i] {
            values[i][i] = 1.0;
        }
        for j in (i + 1)..n {
            let dot: f64 = m.weights[i].iter().zip(&m.weights[j]).map(|(a, b)| a * b).sum();
            let s = dot.clamp(0.0, 1.0);
            values[i][j] = s;
            values[j][i] = s;
        }
    }
    Ok(SimilarityMatrix::new(m.labels.clone(), values, MatrixKind::Category)?
        .with_zero_rows(m.zero_rows.clone())
        .with_summary_rows())
}
