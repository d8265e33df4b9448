//! Measurement and linting toolkit for software classification taxonomies.
//!
//! The crate covers the whole analysis pipeline:
//!
//! - [`dataset`]: the project/category CSV schema and class distributions
//! - [`metrics`]: dataset size, category count and normalized-entropy balance
//! - [`embed`]: word-vector files and label-by-label cosine similarity
//! - [`corpus`]: identifier extraction from source trees into category term documents
//! - [`vectorize`]: TFIDF category vectors and category similarity matrices
//! - [`lint`]: detectors for the seven classification antipatterns
//! - [`reduce`]: hierarchical label mappings, before/after comparison, level voting
//! - [`report`]: canonical JSON, matrix CSV and SVG heatmap emitters
//! - [`analysis`]: end-to-end runs producing a set of report artifacts

pub mod analysis;
pub mod corpus;
pub mod dataset;
pub mod embed;
mod error;
pub mod lint;
pub mod metrics;
pub mod reduce;
pub mod report;
pub mod similarity;
pub mod vectorize;

pub use corpus::{ExtractionConfig, TermDocument};
pub use dataset::{Arity, ClassificationDataset, Field, Project};
pub use embed::EmbeddingTable;
pub use error::{Error, Result};
pub use lint::{AntipatternCode, AntipatternFinding, AntipatternReport, LintConfig, Severity};
pub use metrics::{balance, summary, ClassCounts, DatasetSummary};
pub use reduce::{LabelMapping, MappingPath};
pub use report::AnalysisReport;
pub use similarity::{MatrixKind, SimilarityMatrix};
pub use vectorize::{TfidfMatrix, VectorizeConfig};
