//! Identifier extraction from source files.
//!
//! Two backends produce the same output on well-formed input: a grammar-aware
//! one walking the tree-sitter concrete syntax tree, and a lexical scanner
//! that picks identifier-shaped tokens outside comments and literals.

use std::borrow::Cow;

use serde::{Deserialize, Serialize};
use tree_sitter::Parser;

use super::ExtractionConfig;
use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Backend {
    #[default]
    Grammar,
    Lexical,
}

/// Languages with a registered grammar and keyword list.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SourceLanguage {
    Java,
}

impl SourceLanguage {
    pub fn from_id(id: &str) -> Result<Self> {
        match id.to_ascii_lowercase().as_str() {
            "java" => Ok(SourceLanguage::Java),
            other => Err(Error::UnsupportedLanguage(other.to_string())),
        }
    }

    pub fn extensions(self) -> &'static [&'static str] {
        match self {
            SourceLanguage::Java => &["java"],
        }
    }

    pub fn keywords(self) -> &'static [&'static str] {
        match self {
            SourceLanguage::Java => JAVA_KEYWORDS,
        }
    }

    fn grammar(self) -> tree_sitter::Language {
        match self {
            SourceLanguage::Java => tree_sitter_java::LANGUAGE.into(),
        }
    }

    /// Leaf node kinds that carry identifier text.
    fn identifier_kinds(self) -> &'static [&'static str] {
        match self {
            SourceLanguage::Java => &["identifier", "type_identifier"],
        }
    }
}

/// Reserved words, literal keywords and `var`.
const JAVA_KEYWORDS: &[&str] = &[
    "abstract", "assert", "boolean", "break", "byte", "case", "catch", "char", "class", "const",
    "continue", "default", "do", "double", "else", "enum", "extends", "final", "finally", "float",
    "for", "goto", "if", "implements", "import", "instanceof", "int", "interface", "long",
    "native", "new", "package", "private", "protected", "public", "return", "short", "static",
    "strictfp", "super", "switch", "synchronized", "this", "throw", "throws", "transient", "try",
    "void", "volatile", "while", "true", "false", "null", "var",
];

/// A file was not text and was left out.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SkipFile(pub String);

#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct Extracted {
    pub identifiers: Vec<String>,
    /// The file was not valid UTF-8 and was decoded lossily.
    pub lossy: bool,
}

fn decode(source: &[u8]) -> std::result::Result<(Cow<'_, str>, bool), SkipFile> {
    if source.contains(&0) {
        return Err(SkipFile("binary content (NUL byte)".into()));
    }
    match std::str::from_utf8(source) {
        Ok(s) => Ok((Cow::Borrowed(s), false)),
        Err(_) => Ok((String::from_utf8_lossy(source), true)),
    }
}

pub fn extract_identifiers(
    source: &[u8],
    cfg: &ExtractionConfig,
) -> std::result::Result<Extracted, SkipFile> {
    let (text, lossy) = decode(source)?;
    let language = cfg.source_language().map_err(|e| SkipFile(e.to_string()))?;
    let raw = match cfg.backend {
        Backend::Grammar => grammar_identifiers(&text, language)?,
        Backend::Lexical => lexical_identifiers(&text),
    };
    let identifiers = raw
        .into_iter()
        .filter(|id| !cfg.keywords.contains(id.as_str()))
        .collect();
    Ok(Extracted { identifiers, lossy })
}

fn grammar_identifiers(
    text: &str,
    language: SourceLanguage,
) -> std::result::Result<Vec<String>, SkipFile> {
    let mut parser = Parser::new();
    parser
        .set_language(&language.grammar())
        .map_err(|e| SkipFile(format!("grammar unavailable: {e}")))?;
    let tree = parser
        .parse(text, None)
        .ok_or_else(|| SkipFile("parser produced no tree".into()))?;

    let kinds = language.identifier_kinds();
    let bytes = text.as_bytes();
    let mut out = Vec::new();
    let mut cursor = tree.walk();
    'walk: loop {
        let node = cursor.node();
        if kinds.contains(&node.kind()) {
            if let Ok(s) = node.utf8_text(bytes) {
                out.push(s.to_string());
            }
        } else if cursor.goto_first_child() {
            continue;
        }
        while !cursor.goto_next_sibling() {
            if !cursor.goto_parent() {
                break 'walk;
            }
        }
    }
    Ok(out)
}

fn is_ident_start(c: char) -> bool {
    c.is_alphabetic() || c == '_' || c == '$'
}

fn is_ident_continue(c: char) -> bool {
    c.is_alphanumeric() || c == '_' || c == '$'
}

/// Identifier-shaped tokens of C-family source, skipping comments, string,
/// text-block and character literals, and numeric literals.
pub fn lexical_identifiers(text: &str) -> Vec<String> {
    let chars: Vec<char> = text.chars().collect();
    let n = chars.len();
    let at = |i: usize| chars.get(i).copied();
    let mut out = Vec::new();
    let mut i = 0;
    while i < n {
        let c = chars[i];
        match c {
            '/' if at(i + 1) == Some('/') => {
                while i < n && chars[i] != '\n' {
                    i += 1;
                }
            }
            '/' if at(i + 1) == Some('*') => {
                i += 2;
                while i < n && !(chars[i] == '*' && at(i + 1) == Some('/')) {
                    i += 1;
                }
                i += 2;
            }
            '"' if at(i + 1) == Some('"') && at(i + 2) == Some('"') => {
                i += 3;
                while i < n && !(chars[i] == '"' && at(i + 1) == Some('"') && at(i + 2) == Some('"')) {
                    i += if chars[i] == '\\' { 2 } else { 1 };
                }
                i += 3;
            }
            '"' | '\'' => {
                i += 1;
                while i < n && chars[i] != c && chars[i] != '\n' {
                    i += if chars[i] == '\\' { 2 } else { 1 };
                }
                i += 1;
            }
            c if c.is_ascii_digit() || (c == '.' && at(i + 1).is_some_and(|d| d.is_ascii_digit())) => {
                i += 1;
                while i < n {
                    let d = chars[i];
                    let exponent_sign = matches!(d, '+' | '-') && matches!(chars[i - 1], 'e' | 'E' | 'p' | 'P');
                    if d.is_alphanumeric() || d == '_' || d == '.' || exponent_sign {
                        i += 1;
                    } else {
                        break;
                    }
                }
            }
            c if is_ident_start(c) => {
                let start = i;
                while i < n && is_ident_continue(chars[i]) {
                    i += 1;
                }
                out.push(chars[start..i].iter().collect());
            }
            _ => i += 1,
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn both(src: &str) -> (Vec<String>, Vec<String>) {
        let mut cfg = ExtractionConfig::default();
        let g = extract_identifiers(src.as_bytes(), &cfg).unwrap().identifiers;
        cfg.backend = Backend::Lexical;
        let l = extract_identifiers(src.as_bytes(), &cfg).unwrap().identifiers;
        (g, l)
    }

    #[test]
    fn keywords_excluded() {
        let (g, l) = both("public class HttpServer { int retryCount; }");
        assert_eq!(g, vec!["HttpServer", "retryCount"]);
        assert_eq!(l, g);
    }

    #[test]
    fn comments_and_literals_excluded() {
        let (g, l) = both("class A {\n// getFoo\nString s = \"runQuery\";\n}");
        assert_eq!(g, vec!["A", "String", "s"]);
        assert_eq!(l, g);
    }

    #[test]
    fn text_blocks_chars_and_numbers() {
        let src = "class B { /* block\n comment */ String t = \"\"\"\n  hidden \"quoted\" text\n  \"\"\";\n char c = '\\''; double d = 1.5e-3 + 0x1F + 10L; }";
        let (g, l) = both(src);
        assert_eq!(g, vec!["B", "String", "t", "c", "d"]);
        assert_eq!(l, g);
    }

    #[test]
    fn binary_is_skipped() {
        let cfg = ExtractionConfig::default();
        assert!(extract_identifiers(b"\x00\x01class", &cfg).is_err());
    }

    #[test]
    fn invalid_utf8_is_lossy() {
        let cfg = ExtractionConfig::default();
        let e = extract_identifiers(b"class Caf\xe9 { }", &cfg).unwrap();
        assert!(e.lossy);
        assert!(!e.identifiers.is_empty());
    }
}
