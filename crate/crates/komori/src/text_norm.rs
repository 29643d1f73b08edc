//! Canonical text form shared by every comparison in the toolkit.
//!
//! The pipeline: fold typographic apostrophes (U+2019) to U+0027, apply
//! Unicode NFC, lowercase, replace every character that is not a letter,
//! digit, combining mark, or apostrophe with a space, then tokenize on
//! whitespace. Apostrophes are trimmed from token edges but kept inside
//! (so `ng'ombe` survives intact while `'quoted'` loses its quotes).
//!
//! Normalization is idempotent: feeding a normalized string back through
//! [`normalize`] reproduces it exactly.

use std::collections::BTreeSet;

use unicode_normalization::char::is_combining_mark;
use unicode_normalization::UnicodeNormalization;

/// One word of a normalized sentence.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Token {
    /// The normalized word, never empty and free of whitespace.
    pub surface: String,
    /// Zero-based position within the sentence.
    pub position: usize,
}

/// A sentence after normalization, with the raw input retained.
///
/// `normalized` is always exactly the token surfaces joined by single
/// spaces, so the two views never disagree.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct NormalizedText {
    /// The input as received.
    pub original: String,
    /// Lowercased, NFC, punctuation-stripped form.
    pub normalized: String,
    /// The words of `normalized`, in order.
    pub tokens: Vec<Token>,
}

impl NormalizedText {
    /// Token surfaces in sentence order.
    pub fn token_strs(&self) -> impl Iterator<Item = &str> {
        self.tokens.iter().map(|t| t.surface.as_str())
    }

    /// True when normalization left nothing behind (empty or all-punctuation
    /// input).
    pub fn is_empty(&self) -> bool {
        self.tokens.is_empty()
    }
}

fn keep(c: char) -> bool {
    c.is_alphabetic() || c.is_numeric() || is_combining_mark(c) || c == '\''
}

/// Normalize one sentence.
///
/// Never fails: inputs that normalize to nothing yield an empty token list
/// and an empty `normalized` string.
pub fn normalize(raw: &str) -> NormalizedText {
    let cleaned: String = raw
        .chars()
        .map(|c| if c == '\u{2019}' { '\'' } else { c })
        .nfc()
        .flat_map(char::to_lowercase)
        // Lowercasing can denormalize in rare scripts; re-run NFC so the
        // guarantee holds unconditionally.
        .nfc()
        .map(|c| if keep(c) { c } else { ' ' })
        .collect();

    let mut tokens = Vec::new();
    for piece in cleaned.split_whitespace() {
        let stripped = piece.trim_matches('\'');
        if !stripped.is_empty() {
            tokens.push(Token {
                surface: stripped.to_string(),
                position: tokens.len(),
            });
        }
    }
    let normalized = tokens
        .iter()
        .map(|t| t.surface.as_str())
        .collect::<Vec<_>>()
        .join(" ");

    NormalizedText {
        original: raw.to_string(),
        normalized,
        tokens,
    }
}

/// Distinct words across a batch of normalized sentences, sorted.
pub fn word_set<'a, I>(texts: I) -> BTreeSet<String>
where
    I: IntoIterator<Item = &'a NormalizedText>,
{
    let mut words = BTreeSet::new();
    for text in texts {
        for token in &text.tokens {
            words.insert(token.surface.clone());
        }
    }
    words
}
