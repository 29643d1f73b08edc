//! Corpus filtering: keep donor sentences whose words are covered by a
//! target-language lexicon.
//!
//! A sentence is retained when the fraction of its tokens found in the
//! lexicon (exactly, or fuzzily via a similarity floor) reaches the
//! coverage threshold. Filtering is embarrassingly parallel per line and
//! deterministic: records come back in input order with identical content
//! regardless of thread count, because token lookups are resolved once per
//! distinct token and shared.

use std::collections::{BTreeSet, HashMap};

use rayon::prelude::*;
use thiserror::Error;

use crate::fuzzy_index::BkTree;
use crate::lexicon::Lexicon;
use crate::text_norm::{self, NormalizedText};

#[derive(Debug, Error, Clone, Copy, PartialEq)]
pub enum ConfigError {
    #[error("coverage threshold {0} is outside [0, 1]")]
    CoverageOutOfRange(f64),
    #[error("similarity threshold {0} is outside [0, 100]")]
    SimilarityOutOfRange(f64),
    #[error("min_tokens must be at least 1")]
    MinTokensZero,
}

/// How token coverage is decided.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FilterMode {
    /// A token counts only when the lexicon contains it verbatim.
    Exact,
    /// A token counts when some lexicon word reaches the similarity floor.
    Fuzzy,
}

/// Thresholds governing one filtering run.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FilterConfig {
    /// Minimum fraction of covered tokens for a line to be retained,
    /// in `[0, 1]`.
    pub coverage_threshold: f64,
    /// Similarity floor in percent for fuzzy coverage, in `[0, 100]`.
    /// Ignored by exact filtering.
    pub similarity_threshold: f64,
    pub mode: FilterMode,
    /// Lines with fewer tokens than this are never retained.
    pub min_tokens: usize,
}

impl FilterConfig {
    /// Exact filtering at the standard 80% coverage threshold.
    pub fn exact() -> Self {
        FilterConfig {
            coverage_threshold: 0.80,
            similarity_threshold: 100.0,
            mode: FilterMode::Exact,
            min_tokens: 1,
        }
    }

    /// Fuzzy filtering at 80% coverage with an 80% similarity floor.
    pub fn fuzzy() -> Self {
        FilterConfig {
            coverage_threshold: 0.80,
            similarity_threshold: 80.0,
            mode: FilterMode::Fuzzy,
            min_tokens: 1,
        }
    }

    pub fn validate(&self) -> Result<(), ConfigError> {
        if !(0.0..=1.0).contains(&self.coverage_threshold) {
            return Err(ConfigError::CoverageOutOfRange(self.coverage_threshold));
        }
        if !(0.0..=100.0).contains(&self.similarity_threshold) {
            return Err(ConfigError::SimilarityOutOfRange(self.similarity_threshold));
        }
        if self.min_tokens == 0 {
            return Err(ConfigError::MinTokensZero);
        }
        Ok(())
    }
}

/// One covered token occurrence and the lexicon word that covered it.
#[derive(Debug, Clone, PartialEq)]
pub struct TokenMatch {
    pub token: String,
    pub lexicon_word: String,
    pub similarity: f64,
}

/// The filtering verdict for one corpus line.
#[derive(Debug, Clone, PartialEq)]
pub struct FilterRecord {
    /// 1-based position in the input corpus.
    pub line_no: usize,
    /// The line as read, before normalization.
    pub original: String,
    /// Token count after normalization.
    pub tokens: usize,
    /// Covered token occurrences; always equals `matches.len()`.
    pub matched: usize,
    /// `matched / tokens`, or 0 for token-less lines.
    pub coverage: f64,
    pub retained: bool,
    /// One entry per covered token occurrence, in sentence order.
    pub matches: Vec<TokenMatch>,
}

/// Work counters from one filtering run.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct FilterStats {
    pub lines: usize,
    /// Total token occurrences across the corpus.
    pub token_occurrences: usize,
    /// Distinct tokens, i.e. the number of lookups actually performed.
    pub unique_tokens: usize,
    /// Occurrences answered from the per-token memo instead of a lookup.
    pub cache_hits: usize,
}

fn run_filter<F>(lines: Vec<String>, cfg: &FilterConfig, resolve: F) -> (Vec<FilterRecord>, FilterStats)
where
    F: Fn(&str) -> Option<TokenMatch> + Sync,
{
    let texts: Vec<NormalizedText> = lines.par_iter().map(|l| text_norm::normalize(l)).collect();

    // Resolve each distinct token once; lines then only do map lookups.
    let unique: Vec<&str> = texts
        .iter()
        .flat_map(NormalizedText::token_strs)
        .collect::<BTreeSet<&str>>()
        .into_iter()
        .collect();
    let resolved: HashMap<&str, Option<TokenMatch>> = unique
        .par_iter()
        .map(|&tok| (tok, resolve(tok)))
        .collect();

    let records: Vec<FilterRecord> = texts
        .par_iter()
        .enumerate()
        .map(|(i, text)| {
            let matches: Vec<TokenMatch> = text
                .token_strs()
                .filter_map(|tok| resolved[tok].clone())
                .collect();
            let tokens = text.tokens.len();
            let matched = matches.len();
            let coverage = if tokens == 0 {
                0.0
            } else {
                matched as f64 / tokens as f64
            };
            let retained = tokens >= cfg.min_tokens && coverage >= cfg.coverage_threshold;
            FilterRecord {
                line_no: i + 1,
                original: text.original.clone(),
                tokens,
                matched,
                coverage,
                retained,
                matches,
            }
        })
        .collect();

    let token_occurrences: usize = texts.iter().map(|t| t.tokens.len()).sum();
    let stats = FilterStats {
        lines: lines.len(),
        token_occurrences,
        unique_tokens: unique.len(),
        cache_hits: token_occurrences - unique.len(),
    };
    (records, stats)
}

fn collect_lines<I, S>(corpus: I) -> Vec<String>
where
    I: IntoIterator<Item = S>,
    S: AsRef<str>,
{
    corpus.into_iter().map(|s| s.as_ref().to_string()).collect()
}

/// Filter by exact lexicon membership.
pub fn filter_exact<I, S>(corpus: I, lexicon: &Lexicon, cfg: &FilterConfig) -> Vec<FilterRecord>
where
    I: IntoIterator<Item = S>,
    S: AsRef<str>,
{
    filter_exact_with_stats(corpus, lexicon, cfg).0
}

/// Exact filtering, also reporting work counters.
pub fn filter_exact_with_stats<I, S>(
    corpus: I,
    lexicon: &Lexicon,
    cfg: &FilterConfig,
) -> (Vec<FilterRecord>, FilterStats)
where
    I: IntoIterator<Item = S>,
    S: AsRef<str>,
{
    run_filter(collect_lines(corpus), cfg, |tok| {
        lexicon.contains(tok).then(|| TokenMatch {
            token: tok.to_string(),
            lexicon_word: tok.to_string(),
            similarity: 100.0,
        })
    })
}

/// Filter by fuzzy lexicon membership through a prebuilt index.
pub fn filter_fuzzy<I, S>(corpus: I, index: &BkTree, cfg: &FilterConfig) -> Vec<FilterRecord>
where
    I: IntoIterator<Item = S>,
    S: AsRef<str>,
{
    filter_fuzzy_with_stats(corpus, index, cfg).0
}

/// Fuzzy filtering, also reporting work counters.
pub fn filter_fuzzy_with_stats<I, S>(
    corpus: I,
    index: &BkTree,
    cfg: &FilterConfig,
) -> (Vec<FilterRecord>, FilterStats)
where
    I: IntoIterator<Item = S>,
    S: AsRef<str>,
{
    run_filter(collect_lines(corpus), cfg, |tok| {
        index
            .best_similar(tok, cfg.similarity_threshold)
            .map(|m| TokenMatch {
                token: tok.to_string(),
                lexicon_word: m.word,
                similarity: m.similarity,
            })
    })
}

/// The retained lines, verbatim and in corpus order.
pub fn retained_only(records: &[FilterRecord]) -> Vec<String> {
    records
        .iter()
        .filter(|r| r.retained)
        .map(|r| r.original.clone())
        .collect()
}
