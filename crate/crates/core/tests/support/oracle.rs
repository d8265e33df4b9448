//! Straightforward reference computations used to cross-check the library.
//! Everything is done with linear scans over plain vectors.

#![allow(dead_code)]

/// A document as (term, count) pairs.
pub type Doc = Vec<(String, u64)>;

pub struct OracleOutput {
    pub terms: Vec<String>,
    pub rows: Vec<Vec<f64>>,
    pub similarity: Vec<Vec<f64>>,
}

fn count_of(doc: &Doc, term: &str) -> u64 {
    doc.iter().filter(|(t, _)| t == term).map(|(_, c)| *c).sum()
}

pub fn tfidf(docs: &[Doc], max_df: f64, top_k: usize, smooth: bool) -> OracleOutput {
    let n = docs.len();
    let mut all_terms: Vec<String> = Vec::new();
    for d in docs {
        for (t, c) in d {
            if *c > 0 && !all_terms.contains(t) {
                all_terms.push(t.clone());
            }
        }
    }
    let df = |t: &str| docs.iter().filter(|d| count_of(d, t) > 0).count();
    let total = |t: &str| docs.iter().map(|d| count_of(d, t)).sum::<u64>();

    let mut kept: Vec<String> = all_terms
        .into_iter()
        .filter(|t| (df(t) as f64) / (n as f64) < max_df)
        .collect();
    // selection sort: highest total first, then alphabetical
    let mut ranked = Vec::new();
    while !kept.is_empty() && ranked.len() < top_k {
        let mut best = 0;
        for i in 1..kept.len() {
            let (a, b) = (&kept[i], &kept[best]);
            if total(a) > total(b) || (total(a) == total(b) && a < b) {
                best = i;
            }
        }
        ranked.push(kept.remove(best));
    }

    let idf: Vec<f64> = ranked
        .iter()
        .map(|t| {
            let (n, d) = (n as f64, df(t) as f64);
            if smooth {
                ((1.0 + n) / (1.0 + d)).ln() + 1.0
            } else {
                (n / d).ln()
            }
        })
        .collect();

    let rows: Vec<Vec<f64>> = docs
        .iter()
        .map(|d| {
            let raw: Vec<f64> = ranked.iter().zip(&idf).map(|(t, w)| count_of(d, t) as f64 * w).collect();
            let norm = raw.iter().map(|x| x * x).sum::<f64>().sqrt();
            if norm == 0.0 {
                raw
            } else {
                raw.iter().map(|x| x / norm).collect()
            }
        })
        .collect();

    let zero = |r: &Vec<f64>| r.iter().all(|x| *x == 0.0);
    let similarity = (0..n)
        .map(|i| {
            (0..n)
                .map(|j| {
                    if zero(&rows[i]) || zero(&rows[j]) {
                        0.0
                    } else if i == j {
                        1.0
                    } else {
                        let dot: f64 = rows[i].iter().zip(&rows[j]).map(|(a, b)| a * b).sum();
                        dot.clamp(0.0, 1.0)
                    }
                })
                .collect()
        })
        .collect();

    OracleOutput {
        terms: ranked,
        rows,
        similarity,
    }
}
