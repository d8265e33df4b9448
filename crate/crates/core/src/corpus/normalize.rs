//! Identifier to term normalization: case splitting, lowercasing, stopword
//! removal and stemming.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use super::ExtractionConfig;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum StemmerKind {
    #[default]
    SuffixRules,
    Dictionary,
    None,
}

/// Splits an identifier into words on `_`, `$` and other non-alphanumerics,
/// on lower-to-upper transitions, and before the last capital of an
/// uppercase run that is followed by a lowercase letter
/// (`getHTTPResponse` -> `get`, `HTTP`, `Response`). Digits stay attached to
/// the word they follow.
pub fn split_identifier(ident: &str) -> Vec<String> {
    let mut words = Vec::new();
    for chunk in ident.split(|c: char| !c.is_alphanumeric()) {
        let chars: Vec<char> = chunk.chars().collect();
        let mut start = 0;
        for i in 1..chars.len() {
            let prev = chars[i - 1];
            let cur = chars[i];
            let next = chars.get(i + 1).copied();
            let boundary = (cur.is_uppercase() && (prev.is_lowercase() || prev.is_numeric()))
                || (cur.is_uppercase()
                    && prev.is_uppercase()
                    && next.is_some_and(|n| n.is_lowercase()));
            if boundary {
                words.push(chars[start..i].iter().collect());
                start = i;
            }
        }
        if start < chars.len() {
            words.push(chars[start..].iter().collect());
        }
    }
    words
}

fn keep_token(t: &str, min_len: usize) -> bool {
    t.chars().count() >= min_len && !t.chars().all(|c| c.is_numeric())
}

/// Runs the normalization pipeline over raw identifiers, in order:
/// split, lowercase, stopword removal, stemming. Tokens shorter than the
/// configured minimum length or made only of digits are dropped.
pub fn normalize_terms(raw: &[String], cfg: &ExtractionConfig) -> Vec<String> {
    let mut out = Vec::new();
    for ident in raw {
        let words = if cfg.split_identifiers {
            split_identifier(ident)
        } else {
            vec![ident.clone()]
        };
        for w in words {
            let w = w.to_lowercase();
            if !keep_token(&w, cfg.min_term_length) || cfg.stopwords.contains(&w) {
                continue;
            }
            let stemmed = stem(&w, cfg.stemmer, &cfg.dictionary);
            if keep_token(&stemmed, cfg.min_term_length) {
                out.push(stemmed);
            }
        }
    }
    out
}

pub fn stem(word: &str, kind: StemmerKind, dictionary: &BTreeMap<String, String>) -> String {
    match kind {
        StemmerKind::None => word.to_string(),
        StemmerKind::Dictionary => dictionary
            .get(word)
            .cloned()
            .unwrap_or_else(|| word.to_string()),
        StemmerKind::SuffixRules => suffix_stem(word),
    }
}

fn is_vowel(c: u8) -> bool {
    matches!(c, b'a' | b'e' | b'i' | b'o' | b'u' | b'y')
}

fn has_vowel(s: &str) -> bool {
    s.bytes().any(is_vowel)
}

/// Restores the stem after an inflectional suffix was removed:
/// `-at/-bl/-iz` regain their `e`, doubled consonants are undoubled.
fn tidy(stem: &str) -> String {
    let b = stem.as_bytes();
    if stem.ends_with("at") || stem.ends_with("bl") || stem.ends_with("iz") {
        return format!("{stem}e");
    }
    let n = b.len();
    if n >= 2 && b[n - 1] == b[n - 2] && !is_vowel(b[n - 1]) && !matches!(b[n - 1], b'l' | b's' | b'z') {
        return stem[..n - 1].to_string();
    }
    stem.to_string()
}

/// Small rule-based stemmer for the `-s`, `-ing`, `-ed` and `-er` families.
/// Non-ASCII words are returned unchanged.
pub fn suffix_stem(word: &str) -> String {
    if !word.is_ascii() || word.len() < 4 {
        return word.to_string();
    }
    let mut w = word.to_string();

    if w.ends_with("sses") {
        w.truncate(w.len() - 2);
    } else if w.ends_with("ies") && w.len() > 4 {
        w.truncate(w.len() - 3);
        w.push('y');
    } else if w.ends_with('s')
        && !w.ends_with("ss")
        && !w.ends_with("us")
        && !w.ends_with("is")
        && w.len() > 3
    {
        w.truncate(w.len() - 1);
    }

    for suffix in ["ing", "ed"] {
        if let Some(stem) = w.strip_suffix(suffix) {
            if stem.len() >= 3 && has_vowel(stem) {
                return tidy(stem);
            }
            return w;
        }
    }
    if let Some(stem) = w.strip_suffix("er") {
        if stem.len() >= 4 && has_vowel(stem) {
            return tidy(stem);
        }
    }
    w
}
