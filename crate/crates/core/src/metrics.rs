//! Dataset summary statistics: size, number of categories, class balance and
//! the smallest and largest class.

use serde::{Deserialize, Serialize};

use crate::dataset::{class_distribution, ClassificationDataset, Field};
use crate::error::{Error, Result};

/// Class sizes of a dataset. Zero-sized classes are allowed and still count
/// toward the number of categories.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ClassCounts {
    counts: Vec<u64>,
}

impl ClassCounts {
    pub fn new(counts: Vec<u64>) -> Result<Self> {
        if counts.is_empty() {
            return Err(Error::EmptyInput("no categories".into()));
        }
        Ok(ClassCounts { counts })
    }

    pub fn counts(&self) -> &[u64] {
        &self.counts
    }

    /// Number of categories.
    pub fn k(&self) -> usize {
        self.counts.len()
    }

    /// Total number of examples.
    pub fn n(&self) -> u64 {
        self.counts.iter().sum()
    }
}

/// Shannon entropy of the class proportions, in nats (`0 ln 0 = 0`).
fn entropy(counts: &[u64], n: f64) -> f64 {
    counts
        .iter()
        .filter(|&&c| c > 0)
        .map(|&c| {
            let p = c as f64 / n;
            -p * p.ln()
        })
        .sum()
}

/// Normalized class entropy: 1 for equally sized classes, 0 when every
/// example sits in one class.
pub fn balance(cc: &ClassCounts) -> Result<f64> {
    if cc.k() < 2 {
        return Err(Error::Degenerate(
            "single category: balance undefined, denominator ln 1 = 0".into(),
        ));
    }
    let n = cc.n();
    if n == 0 {
        return Err(Error::EmptyInput("no examples".into()));
    }
    let b = entropy(&cc.counts, n as f64) / (cc.k() as f64).ln();
    Ok(b.clamp(0.0, 1.0))
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DatasetSummary {
    pub examples: usize,
    pub categories: usize,
    pub balance: f64,
    pub min: usize,
    pub max: usize,
}

pub fn summary(ds: &ClassificationDataset, field: Field) -> Result<DatasetSummary> {
    let dist = class_distribution(ds, field)?;
    let counts: Vec<u64> = dist.iter().map(|(_, c)| c as u64).collect();
    let cc = ClassCounts::new(counts)?;
    Ok(DatasetSummary {
        examples: ds.len(),
        categories: cc.k(),
        balance: balance(&cc)?,
        min: dist.iter().map(|(_, c)| c).min().unwrap_or(0),
        max: dist.iter().map(|(_, c)| c).max().unwrap_or(0),
    })
}
