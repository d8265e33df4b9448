use std::collections::HashMap;
use std::io::Cursor;

use proptest::prelude::*;
use taxolint::embed::{embed_label, label_similarity_matrix, read_embeddings, EmbeddingTable};
use taxolint::Error;

const PAIRS: &str = include_str!("fixtures/pair_label_vectors.txt");

fn labels(v: &[&str]) -> Vec<String> {
    v.iter().map(|s| s.to_string()).collect()
}

/// Reads the fixture into plain vectors, rounding through f32 the way vector
/// files are stored.
fn oracle_table() -> HashMap<String, Vec<f64>> {
    PAIRS
        .lines()
        .skip(1)
        .map(|l| {
            let mut it = l.split_whitespace();
            let w = it.next().unwrap().to_string();
            (w, it.map(|x| x.parse::<f32>().unwrap() as f64).collect())
        })
        .collect()
}

fn oracle_similarity(t: &HashMap<String, Vec<f64>>, a: &str, b: &str) -> f64 {
    let embed = |label: &str| {
        let words: Vec<String> = label.split(' ').map(|w| w.to_lowercase()).collect();
        let mut acc = vec![0.0; 12];
        for w in &words {
            let v = &t[w];
            let n = v.iter().map(|x| x * x).sum::<f64>().sqrt();
            for (a, x) in acc.iter_mut().zip(v) {
                *a += x / n / words.len() as f64;
            }
        }
        acc
    };
    let (x, y) = (embed(a), embed(b));
    let dot: f64 = x.iter().zip(&y).map(|(a, b)| a * b).sum();
    let nx = x.iter().map(|v| v * v).sum::<f64>().sqrt();
    let ny = y.iter().map(|v| v * v).sum::<f64>().sqrt();
    dot / (nx * ny)
}

#[test]
fn orthonormal_hand_example() {
    let t = EmbeddingTable::from_rows([
        ("machine", vec![1.0, 0.0, 0.0]),
        ("learning", vec![0.0, 2.0, 0.0]),
        ("deep", vec![0.0, 0.0, 3.0]),
    ])
    .unwrap();
    let v = embed_label("Machine Learning", &t).unwrap();
    assert_eq!(v.vector, vec![0.5, 0.5, 0.0]);
    let s = label_similarity_matrix(&labels(&["Machine Learning", "Deep Learning", "Deep"]), &t).unwrap();
    assert!((s.matrix.get("Machine Learning", "Deep Learning").unwrap() - 0.5).abs() < 1e-12);
    assert!((s.matrix.get("Deep", "Deep Learning").unwrap() - 0.5f64.sqrt()).abs() < 1e-12);
    assert_eq!(s.matrix.get("Machine Learning", "Deep"), Some(0.0));
}

#[test]
fn pinned_pairs_match_oracle() {
    let table = read_embeddings(Cursor::new(PAIRS), None).unwrap().table;
    let oracle = oracle_table();
    let cases = [
        ("Cryptocurrency", "Bitcoin", 0.84),
        ("Web Game", "Game Engine", 0.60),
        ("Web Game", "Web Framework", 0.59),
        ("Compilers", "Interpreters", 0.52),
        ("Networking", "Communication", 0.48),
        ("xterm", "Compilers", 0.46),
    ];
    for (a, b, target) in cases {
        let s = label_similarity_matrix(&labels(&[a, b]), &table).unwrap();
        let got = s.matrix.get(a, b).unwrap();
        let expected = oracle_similarity(&oracle, a, b);
        assert!((got - expected).abs() < 1e-9, "{a}/{b}: {got} vs {expected}");
        assert!((got - target).abs() <= 0.05, "{a}/{b}: {got}");
    }
    let s = label_similarity_matrix(&labels(&["Cryptocurrency", "Bitcoin", "Editor"]), &table).unwrap();
    assert!(s.matrix.get("Cryptocurrency", "Bitcoin") > s.matrix.get("Cryptocurrency", "Editor"));
}

#[test]
fn oov_handling() {
    let t = EmbeddingTable::from_rows([("web", vec![1.0, 0.0]), ("game", vec![0.0, 1.0])]).unwrap();
    let s = label_similarity_matrix(&labels(&["Web Game", "Web", "Boardgame"]), &t).unwrap();
    assert_eq!(s.unembeddable, vec!["Boardgame"]);
    assert_eq!(s.matrix.names(), ["Web Game", "Web"]);
    let v = embed_label("Web Thing", &t).unwrap();
    assert_eq!(v.oov_words, vec!["thing"]);
    assert!(matches!(
        label_similarity_matrix(&labels(&["Web", "Boardgame"]), &t),
        Err(Error::InsufficientInput(_))
    ));
}

#[test]
fn file_format_errors() {
    assert!(matches!(
        read_embeddings(Cursor::new("a 1 2\nb 1\n"), None),
        Err(Error::Format { line: 2, .. })
    ));
    let loaded = read_embeddings(Cursor::new("3 2\na 1 0\na 0 1\n"), None).unwrap();
    assert_eq!(loaded.table.vocabulary_size(), 1);
    assert_eq!(loaded.table.get("a"), Some(vec![1.0, 0.0]));
    assert_eq!(loaded.warnings.len(), 2);
}

fn table_strategy() -> impl Strategy<Value = Vec<Vec<f64>>> {
    prop::collection::vec(prop::collection::vec(-5.0f64..5.0, 4), 5)
        .prop_filter("non-zero rows", |rows| rows.iter().all(|r| r.iter().any(|x| x.abs() > 1e-3)))
}

const WORDS: [&str; 5] = ["alpha", "beta", "gamma", "delta", "omega"];
const LABELS: [&str; 5] = ["Alpha", "Beta Gamma", "Gamma Delta", "Omega", "Alpha Omega Beta"];

fn table(rows: &[Vec<f64>]) -> EmbeddingTable {
    EmbeddingTable::from_rows(WORDS.iter().zip(rows).map(|(w, r)| (*w, r.clone()))).unwrap()
}

proptest! {
    #[test]
    fn matrix_properties(rows in table_strategy()) {
        let s = label_similarity_matrix(&labels(&LABELS), &table(&rows)).unwrap();
        let m = &s.matrix;
        for i in 0..m.len() {
            prop_assert_eq!(m.values()[i][i], 1.0);
            for j in 0..m.len() {
                let v = m.values()[i][j];
                prop_assert!((v - m.values()[j][i]).abs() < 1e-12);
                prop_assert!((-1.0 - 1e-12..=1.0 + 1e-12).contains(&v));
            }
        }
    }

    #[test]
    fn word_vector_scale_invariance(rows in table_strategy(), f in 0.1f64..10.0) {
        let scaled: Vec<Vec<f64>> = rows.iter().map(|r| r.iter().map(|x| x * f).collect()).collect();
        let a = label_similarity_matrix(&labels(&LABELS), &table(&rows)).unwrap();
        let b = label_similarity_matrix(&labels(&LABELS), &table(&scaled)).unwrap();
        for (ra, rb) in a.matrix.values().iter().zip(b.matrix.values()) {
            for (x, y) in ra.iter().zip(rb) {
                prop_assert!((x - y).abs() < 1e-5);
            }
        }
    }

    #[test]
    fn submatrix_equals_recomputation(rows in table_strategy()) {
        let t = table(&rows);
        let full = label_similarity_matrix(&labels(&LABELS), &t).unwrap();
        let sub = full.matrix.submatrix(&["Omega", "Beta Gamma"]).unwrap();
        let direct = label_similarity_matrix(&labels(&["Omega", "Beta Gamma"]), &t).unwrap();
        prop_assert_eq!(sub.values(), direct.matrix.values());
    }
}
