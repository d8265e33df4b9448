//! Machine-readable outputs: canonical report JSON, similarity matrix CSV and
//! SVG heatmaps. Every emitter is byte-for-byte deterministic.

use std::collections::BTreeMap;
use std::fmt::Write as _;

use serde::{Deserialize, Serialize};
use serde_json::Value;
use sha2::{Digest, Sha256};

use crate::corpus::{ExcludedProject, ExtractionConfig};
use crate::dataset::{ClassDistribution, Field};
use crate::error::{Error, Result};
use crate::lint::{AntipatternReport, LintConfig};
use crate::metrics::DatasetSummary;
use crate::reduce::ComparisonReport;
use crate::similarity::{MeanStd, SimilarityDistribution, SimilarityMatrix};
use crate::vectorize::VectorizeConfig;

/// Significant digits kept for every float in emitted JSON and CSV.
pub const SIGNIFICANT_DIGITS: usize = 9;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ReportConfigs {
    pub extraction: ExtractionConfig,
    pub vectorize: VectorizeConfig,
    pub lint: LintConfig,
}

impl ReportConfigs {
    pub fn fingerprint(&self) -> String {
        fingerprint(self)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DatasetSection {
    pub field: Field,
    pub summaries: BTreeMap<Field, DatasetSummary>,
    pub distribution: ClassDistribution,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LabelSimilaritySection {
    pub distribution: SimilarityDistribution,
    pub unembeddable: Vec<String>,
    /// Label -> words missing from the vector table.
    pub oov_words: BTreeMap<String, Vec<String>>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CategorySimilaritySection {
    pub stats: MeanStd,
    pub distribution: SimilarityDistribution,
    pub vocabulary_size: usize,
    pub documents: usize,
    pub zero_rows: Vec<String>,
    pub empty_labels: Vec<String>,
    pub excluded_projects: Vec<ExcludedProject>,
    pub skipped_files: usize,
    pub lossy_files: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AnalysisReport {
    pub tool_version: String,
    pub config_fingerprint: String,
    pub configs: ReportConfigs,
    pub dataset: DatasetSection,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub label_similarity: Option<LabelSimilaritySection>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub category_similarity: Option<CategorySimilaritySection>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub antipatterns: Option<AntipatternReport>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub comparison: Option<ComparisonReport>,
    pub notes: Vec<String>,
}

impl AnalysisReport {
    pub fn new(configs: ReportConfigs, dataset: DatasetSection) -> Self {
        AnalysisReport {
            tool_version: env!("CARGO_PKG_VERSION").to_string(),
            config_fingerprint: configs.fingerprint(),
            configs,
            dataset,
            label_similarity: None,
            category_similarity: None,
            antipatterns: None,
            comparison: None,
            notes: Vec::new(),
        }
    }
}

/// Rounds to [`SIGNIFICANT_DIGITS`] significant digits.
pub fn round_significant(x: f64) -> f64 {
    if x == 0.0 || !x.is_finite() {
        return x;
    }
    format!("{:.*e}", SIGNIFICANT_DIGITS - 1, x)
        .parse()
        .unwrap_or(x)
}

fn canonicalize(v: Value) -> Value {
    match v {
        Value::Number(n) if n.is_f64() => {
            let x = n.as_f64().unwrap_or(0.0);
            serde_json::Number::from_f64(round_significant(x))
                .map(Value::Number)
                .unwrap_or(Value::Null)
        }
        Value::Array(a) => Value::Array(a.into_iter().map(canonicalize).collect()),
        Value::Object(o) => {
            let sorted: BTreeMap<String, Value> =
                o.into_iter().map(|(k, v)| (k, canonicalize(v))).collect();
            Value::Object(sorted.into_iter().collect())
        }
        other => other,
    }
}

/// Canonical JSON: keys sorted, floats rounded to 9 significant digits,
/// two-space indentation, trailing newline.
pub fn to_canonical_json<T: Serialize>(value: &T) -> Result<Vec<u8>> {
    let v = canonicalize(serde_json::to_value(value)?);
    let mut out = serde_json::to_vec_pretty(&v)?;
    out.push(b'\n');
    Ok(out)
}

pub fn emit_json(r: &AnalysisReport) -> Result<Vec<u8>> {
    to_canonical_json(r)
}

pub fn parse_json(bytes: &[u8]) -> Result<AnalysisReport> {
    Ok(serde_json::from_slice(bytes)?)
}

/// Hex SHA-256 of the canonical JSON form of `value`.
pub fn fingerprint<T: Serialize>(value: &T) -> String {
    let bytes = to_canonical_json(value).expect("configs serialize");
    hex::encode(Sha256::digest(&bytes))
}

fn fmt_value(x: f64) -> String {
    format!("{}", round_significant(x))
}

/// Header row of names, one row per name, then `mean` and `max` rows when the
/// matrix carries summary rows.
pub fn emit_matrix_csv(m: &SimilarityMatrix) -> Result<Vec<u8>> {
    if m.is_empty() {
        return Err(Error::InsufficientInput("matrix has no names".into()));
    }
    let mut w = csv::WriterBuilder::new()
        .terminator(csv::Terminator::Any(b'\n'))
        .from_writer(Vec::new());
    let mut header = vec![String::new()];
    header.extend(m.names().iter().cloned());
    w.write_record(&header)?;
    for (name, row) in m.names().iter().zip(m.values()) {
        let mut rec = vec![name.clone()];
        rec.extend(row.iter().map(|&x| fmt_value(x)));
        w.write_record(&rec)?;
    }
    if let Some(s) = m.summary() {
        for (name, row) in [("mean", &s.mean), ("max", &s.max)] {
            let mut rec = vec![name.to_string()];
            rec.extend(row.iter().map(|&x| fmt_value(x)));
            w.write_record(&rec)?;
        }
    }
    w.into_inner()
        .map_err(|e| Error::io("<csv buffer>", e.into_error()))
}

/// Piecewise-linear color ramp from the lowest to the highest value.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ColorScale {
    pub stops: Vec<[u8; 3]>,
}

impl ColorScale {
    pub fn blues() -> Self {
        ColorScale {
            stops: vec![[0xf7, 0xfb, 0xff], [0x6b, 0xae, 0xd6], [0x08, 0x30, 0x6b]],
        }
    }

    pub fn greys() -> Self {
        ColorScale {
            stops: vec![[0xff, 0xff, 0xff], [0x00, 0x00, 0x00]],
        }
    }

    pub fn from_name(name: &str) -> Result<Self> {
        match name {
            "blues" => Ok(Self::blues()),
            "greys" | "grays" => Ok(Self::greys()),
            other => Err(Error::Config(format!("unknown color scale `{other}`"))),
        }
    }

    /// Color at `t` in `[0, 1]`.
    pub fn at(&self, t: f64) -> [u8; 3] {
        let t = if t.is_finite() { t.clamp(0.0, 1.0) } else { 0.0 };
        let segments = self.stops.len() - 1;
        if segments == 0 {
            return self.stops[0];
        }
        let pos = t * segments as f64;
        let i = (pos.floor() as usize).min(segments - 1);
        let f = pos - i as f64;
        let (a, b) = (self.stops[i], self.stops[i + 1]);
        let mix = |x: u8, y: u8| (x as f64 + (y as f64 - x as f64) * f).round() as u8;
        [mix(a[0], b[0]), mix(a[1], b[1]), mix(a[2], b[2])]
    }
}

impl Default for ColorScale {
    fn default() -> Self {
        Self::blues()
    }
}

fn hex_color(c: [u8; 3]) -> String {
    format!("#{:02x}{:02x}{:02x}", c[0], c[1], c[2])
}

fn xml_escape(s: &str) -> String {
    let mut out = String::with_capacity(s.len());
    for c in s.chars() {
        match c {
            '&' => out.push_str("&amp;"),
            '<' => out.push_str("&lt;"),
            '>' => out.push_str("&gt;"),
            '"' => out.push_str("&quot;"),
            '\'' => out.push_str("&apos;"),
            c => out.push(c),
        }
    }
    out
}

const CELL: usize = 24;
const CHAR_W: usize = 7;
const DIAGONAL_FILL: &str = "#bdbdbd";

/// One rectangle per cell, colored linearly over `[0, max off-diagonal]`;
/// diagonal cells use a fixed grey. Summary rows, when present, follow the
/// matrix after a gap.
pub fn emit_heatmap_svg(m: &SimilarityMatrix, scale: &ColorScale) -> Result<Vec<u8>> {
    if m.is_empty() {
        return Err(Error::InsufficientInput("matrix has no names".into()));
    }
    let n = m.len();
    let longest = m.names().iter().map(|s| s.chars().count()).max().unwrap_or(0).max(4);
    let margin = 10 + longest * CHAR_W;
    let summary_rows = if m.summary().is_some() { 2 } else { 0 };
    let gap = if summary_rows > 0 { CELL / 2 } else { 0 };
    let width = margin + n * CELL + 10;
    let height = margin + n * CELL + gap + summary_rows * CELL + 10;
    let vmax = m.max_off_diagonal();
    let color = |v: f64| {
        let t = if vmax > 0.0 { v / vmax } else { 0.0 };
        hex_color(scale.at(t))
    };

    let mut s = String::new();
    let _ = writeln!(s, r#"<?xml version="1.0" encoding="UTF-8"?>"#);
    let _ = writeln!(
        s,
        r#"<svg xmlns="http://www.w3.org/2000/svg" version="1.1" width="{width}" height="{height}" viewBox="0 0 {width} {height}" font-family="sans-serif" font-size="11">"#
    );
    let _ = writeln!(s, r#"<title>cosine similarity ({n} x {n}, scale max {:.6})</title>"#, vmax);

    for (j, name) in m.names().iter().enumerate() {
        let x = margin + j * CELL + CELL / 2;
        let y = margin - 4;
        let _ = writeln!(
            s,
            r#"<text x="{x}" y="{y}" transform="rotate(-60 {x} {y})">{}</text>"#,
            xml_escape(name)
        );
    }
    for (i, name) in m.names().iter().enumerate() {
        let y = margin + i * CELL + CELL / 2 + 4;
        let _ = writeln!(
            s,
            r#"<text x="{}" y="{y}" text-anchor="end">{}</text>"#,
            margin - 4,
            xml_escape(name)
        );
    }

    for i in 0..n {
        for j in 0..n {
            let v = m.values()[i][j];
            let (class, fill) = if i == j {
                ("cell diag", DIAGONAL_FILL.to_string())
            } else {
                ("cell", color(v))
            };
            let _ = writeln!(
                s,
                r#"<rect class="{class}" x="{}" y="{}" width="{CELL}" height="{CELL}" fill="{fill}"><title>{} / {}: {:.4}</title></rect>"#,
                margin + j * CELL,
                margin + i * CELL,
                xml_escape(&m.names()[i]),
                xml_escape(&m.names()[j]),
                v
            );
        }
    }

    if let Some(summary) = m.summary() {
        for (r, (label, row)) in [("mean", &summary.mean), ("max", &summary.max)].into_iter().enumerate() {
            let y = margin + n * CELL + gap + r * CELL;
            let _ = writeln!(
                s,
                r#"<text x="{}" y="{}" text-anchor="end">{label}</text>"#,
                margin - 4,
                y + CELL / 2 + 4
            );
            for (j, &v) in row.iter().enumerate() {
                let _ = writeln!(
                    s,
                    r#"<rect class="summary" x="{}" y="{y}" width="{CELL}" height="{CELL}" fill="{}"><title>{label} {}: {:.4}</title></rect>"#,
                    margin + j * CELL,
                    color(v),
                    xml_escape(&m.names()[j]),
                    v
                );
            }
        }
    }
    s.push_str("</svg>\n");
    Ok(s.into_bytes())
}
