//! Square cosine-similarity matrices shared by the label (embedding) and
//! category (TFIDF) analyses, plus their distribution statistics.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

const SYMMETRY_TOL: f64 = 1e-9;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum MatrixKind {
    Label,
    Category,
}

/// Per-name mean and max over off-diagonal entries.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SummaryRows {
    pub mean: Vec<f64>,
    pub max: Vec<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SimilarityMatrix {
    names: Vec<String>,
    values: Vec<Vec<f64>>,
    kind: MatrixKind,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    summary: Option<SummaryRows>,
    /// Names whose underlying vector is zero; their rows are all zero.
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    zero_rows: Vec<String>,
}

impl SimilarityMatrix {
    pub fn new(names: Vec<String>, values: Vec<Vec<f64>>, kind: MatrixKind) -> Result<Self> {
        let m = names.len();
        if m == 0 {
            return Err(Error::InsufficientInput("similarity matrix has no names".into()));
        }
        if values.len() != m || values.iter().any(|r| r.len() != m) {
            return Err(Error::Matrix(format!("expected a {m}x{m} matrix")));
        }
        for i in 0..m {
            for j in 0..i {
                if (values[i][j] - values[j][i]).abs() > SYMMETRY_TOL {
                    return Err(Error::Matrix(format!(
                        "asymmetric entry ({}, {})",
                        names[i], names[j]
                    )));
                }
            }
        }
        Ok(SimilarityMatrix {
            names,
            values,
            kind,
            summary: None,
            zero_rows: Vec::new(),
        })
    }

    pub(crate) fn with_zero_rows(mut self, zero_rows: Vec<String>) -> Self {
        self.zero_rows = zero_rows;
        self
    }

    /// Attaches per-row mean and max of the off-diagonal entries.
    pub fn with_summary_rows(mut self) -> Self {
        let m = self.len();
        let mut mean = Vec::with_capacity(m);
        let mut max = Vec::with_capacity(m);
        for i in 0..m {
            let off: Vec<f64> = (0..m).filter(|&j| j != i).map(|j| self.values[i][j]).collect();
            if off.is_empty() {
                mean.push(0.0);
                max.push(0.0);
            } else {
                mean.push(off.iter().sum::<f64>() / off.len() as f64);
                max.push(off.iter().cloned().fold(f64::NEG_INFINITY, f64::max));
            }
        }
        self.summary = Some(SummaryRows { mean, max });
        self
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn values(&self) -> &[Vec<f64>] {
        &self.values
    }

    pub fn kind(&self) -> MatrixKind {
        self.kind
    }

    pub fn summary(&self) -> Option<&SummaryRows> {
        self.summary.as_ref()
    }

    pub fn zero_rows(&self) -> &[String] {
        &self.zero_rows
    }

    pub fn len(&self) -> usize {
        self.names.len()
    }

    pub fn is_empty(&self) -> bool {
        self.names.is_empty()
    }

    pub fn index_of(&self, name: &str) -> Option<usize> {
        self.names.iter().position(|n| n == name)
    }

    pub fn get(&self, a: &str, b: &str) -> Option<f64> {
        Some(self.values[self.index_of(a)?][self.index_of(b)?])
    }

    /// Upper-triangle off-diagonal entries in row-major order.
    pub fn off_diagonal(&self) -> Vec<f64> {
        self.pairs().map(|(_, _, v)| v).collect()
    }

    /// `(i, j, value)` for every `i < j`.
    pub fn pairs(&self) -> impl Iterator<Item = (usize, usize, f64)> + '_ {
        let m = self.len();
        (0..m).flat_map(move |i| ((i + 1)..m).map(move |j| (i, j, self.values[i][j])))
    }

    /// Largest off-diagonal value, 0 for a 1x1 matrix.
    pub fn max_off_diagonal(&self) -> f64 {
        self.pairs().map(|(_, _, v)| v).fold(0.0, f64::max)
    }

    /// Principal submatrix over the given names, in the given order.
    pub fn submatrix(&self, names: &[&str]) -> Result<SimilarityMatrix> {
        let ix: Vec<usize> = names
            .iter()
            .map(|n| {
                self.index_of(n)
                    .ok_or_else(|| Error::Matrix(format!("unknown name `{n}`")))
            })
            .collect::<Result<_>>()?;
        let values = ix
            .iter()
            .map(|&i| ix.iter().map(|&j| self.values[i][j]).collect())
            .collect();
        SimilarityMatrix::new(
            ix.iter().map(|&i| self.names[i].clone()).collect(),
            values,
            self.kind,
        )
    }
}

pub fn cosine(a: &[f64], b: &[f64]) -> f64 {
    let (mut dot, mut na, mut nb) = (0.0, 0.0, 0.0);
    for (x, y) in a.iter().zip(b) {
        dot += x * y;
        na += x * x;
        nb += y * y;
    }
    if na == 0.0 || nb == 0.0 {
        return 0.0;
    }
    dot / (na.sqrt() * nb.sqrt())
}

/// Population mean and standard deviation.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MeanStd {
    pub mean: f64,
    pub std: f64,
}

impl MeanStd {
    pub fn of(values: &[f64]) -> Option<MeanStd> {
        if values.is_empty() {
            return None;
        }
        let n = values.len() as f64;
        let mean = values.iter().sum::<f64>() / n;
        let var = values.iter().map(|v| (v - mean).powi(2)).sum::<f64>() / n;
        Some(MeanStd {
            mean,
            std: var.sqrt(),
        })
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct OutlierPair {
    pub a: String,
    pub b: String,
    pub similarity: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SimilarityDistribution {
    pub pairs: usize,
    pub mean: f64,
    pub std: f64,
    pub min: f64,
    pub q1: f64,
    pub median: f64,
    pub q3: f64,
    pub max: f64,
    pub outlier_threshold: f64,
    pub outliers: Vec<OutlierPair>,
}

/// Linear-interpolation quantile of sorted data.
fn quantile(sorted: &[f64], q: f64) -> f64 {
    let pos = q * (sorted.len() - 1) as f64;
    let lo = pos.floor() as usize;
    let hi = pos.ceil() as usize;
    sorted[lo] + (sorted[hi] - sorted[lo]) * (pos - lo as f64)
}

pub fn similarity_distribution(
    m: &SimilarityMatrix,
    outlier_threshold: f64,
) -> Result<SimilarityDistribution> {
    let mut values = m.off_diagonal();
    let ms = MeanStd::of(&values).ok_or_else(|| {
        Error::InsufficientInput("need at least 2 names for a similarity distribution".into())
    })?;
    values.sort_by(f64::total_cmp);

    let mut outliers: Vec<OutlierPair> = m
        .pairs()
        .filter(|&(_, _, v)| v >= outlier_threshold)
        .map(|(i, j, v)| OutlierPair {
            a: m.names[i].clone(),
            b: m.names[j].clone(),
            similarity: v,
        })
        .collect();
    outliers.sort_by(|x, y| {
        y.similarity
            .total_cmp(&x.similarity)
            .then_with(|| x.a.cmp(&y.a))
            .then_with(|| x.b.cmp(&y.b))
    });

    Ok(SimilarityDistribution {
        pairs: values.len(),
        mean: ms.mean,
        std: ms.std,
        min: values[0],
        q1: quantile(&values, 0.25),
        median: quantile(&values, 0.5),
        q3: quantile(&values, 0.75),
        max: values[values.len() - 1],
        outlier_threshold,
        outliers,
    })
}

/// Mean and standard deviation over the upper-triangle off-diagonal entries.
pub fn corpus_similarity_stats(m: &SimilarityMatrix) -> Result<MeanStd> {
    MeanStd::of(&m.off_diagonal()).ok_or_else(|| {
        Error::InsufficientInput("need at least 2 categories for similarity statistics".into())
    })
}
