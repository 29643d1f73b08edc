//! Corpus-level evaluation metrics: WER, CER, and ROUGE-1/2/L/Lsum.
//!
//! WER and CER are micro-averaged: total edit errors over total reference
//! units. ROUGE scores are per-pair F1 values macro-averaged over the
//! corpus, with clipped n-gram counts and token-level LCS. By default all
//! text passes through the shared normalizer first; [`TextPrep::Raw`]
//! compares whitespace-split input verbatim.

use std::collections::HashMap;
use std::str::FromStr;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::editdist::levenshtein_seq;
use crate::text_norm;

#[derive(Debug, Error, Clone, Copy, PartialEq, Eq)]
pub enum MetricsError {
    /// References and hypotheses must pair up one to one.
    #[error("got {refs} references but {hyps} hypotheses")]
    LengthMismatch { refs: usize, hyps: usize },
    /// WER and CER divide by reference length, so a reference that
    /// normalizes to nothing has no defined score.
    #[error("reference at index {index} is empty after preparation")]
    EmptyReference { index: usize },
}

/// How raw strings become comparable units.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum TextPrep {
    /// Run the shared normalizer first (case, punctuation, NFC).
    #[default]
    Normalized,
    /// Split on whitespace verbatim; characters compare as given.
    Raw,
}

/// The metrics this module can compute.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Metric {
    Wer,
    Cer,
    Rouge1,
    Rouge2,
    RougeL,
    RougeLsum,
}

impl Metric {
    pub const ALL: [Metric; 6] = [
        Metric::Wer,
        Metric::Cer,
        Metric::Rouge1,
        Metric::Rouge2,
        Metric::RougeL,
        Metric::RougeLsum,
    ];

    pub fn name(&self) -> &'static str {
        match self {
            Metric::Wer => "wer",
            Metric::Cer => "cer",
            Metric::Rouge1 => "rouge1",
            Metric::Rouge2 => "rouge2",
            Metric::RougeL => "rougeL",
            Metric::RougeLsum => "rougeLsum",
        }
    }
}

impl FromStr for Metric {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Metric::ALL
            .into_iter()
            .find(|m| m.name().eq_ignore_ascii_case(s))
            .ok_or_else(|| format!("unknown metric {s:?}"))
    }
}

/// Scores for one evaluation run; metrics that were not requested stay
/// `None` and are omitted from JSON.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EvalScores {
    #[serde(skip_serializing_if = "Option::is_none")]
    pub wer: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub cer: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub rouge1: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub rouge2: Option<f64>,
    #[serde(rename = "rougeL", skip_serializing_if = "Option::is_none")]
    pub rouge_l: Option<f64>,
    #[serde(rename = "rougeLsum", skip_serializing_if = "Option::is_none")]
    pub rouge_lsum: Option<f64>,
    pub n_pairs: usize,
}

fn check_lengths(refs: usize, hyps: usize) -> Result<(), MetricsError> {
    if refs != hyps {
        return Err(MetricsError::LengthMismatch { refs, hyps });
    }
    Ok(())
}

fn prep_words(s: &str, prep: TextPrep) -> Vec<String> {
    match prep {
        TextPrep::Normalized => text_norm::normalize(s)
            .tokens
            .into_iter()
            .map(|t| t.surface)
            .collect(),
        TextPrep::Raw => s.split_whitespace().map(str::to_string).collect(),
    }
}

fn prep_chars(s: &str, prep: TextPrep) -> Vec<char> {
    match prep {
        TextPrep::Normalized => text_norm::normalize(s).normalized.chars().collect(),
        TextPrep::Raw => s.chars().collect(),
    }
}

/// Newline-split segments, each tokenized. The split happens on the raw
/// string so normalization cannot swallow segment boundaries.
fn prep_segments(s: &str, prep: TextPrep) -> Vec<Vec<String>> {
    s.split('\n').map(|seg| prep_words(seg, prep)).collect()
}

fn f1(overlap: f64, precision_denom: f64, recall_denom: f64) -> f64 {
    if overlap == 0.0 {
        return 0.0;
    }
    let p = overlap / precision_denom;
    let r = overlap / recall_denom;
    2.0 * p * r / (p + r)
}

fn wer_prepped(refs: &[Vec<String>], hyps: &[Vec<String>]) -> Result<f64, MetricsError> {
    let mut errors = 0usize;
    let mut total = 0usize;
    for (index, (r, h)) in refs.iter().zip(hyps).enumerate() {
        if r.is_empty() {
            return Err(MetricsError::EmptyReference { index });
        }
        errors += levenshtein_seq(r, h);
        total += r.len();
    }
    Ok(if total == 0 { 0.0 } else { errors as f64 / total as f64 })
}

fn cer_prepped(refs: &[Vec<char>], hyps: &[Vec<char>]) -> Result<f64, MetricsError> {
    let mut errors = 0usize;
    let mut total = 0usize;
    for (index, (r, h)) in refs.iter().zip(hyps).enumerate() {
        if r.is_empty() {
            return Err(MetricsError::EmptyReference { index });
        }
        errors += levenshtein_seq(r, h);
        total += r.len();
    }
    Ok(if total == 0 { 0.0 } else { errors as f64 / total as f64 })
}

fn ngram_counts(tokens: &[String], n: usize) -> HashMap<&[String], usize> {
    let mut counts = HashMap::new();
    if tokens.len() >= n {
        for gram in tokens.windows(n) {
            *counts.entry(gram).or_insert(0) += 1;
        }
    }
    counts
}

fn rouge_n_pair(r: &[String], h: &[String], n: usize) -> f64 {
    let rc = ngram_counts(r, n);
    let hc = ngram_counts(h, n);
    let r_total: usize = rc.values().sum();
    let h_total: usize = hc.values().sum();
    if r_total == 0 || h_total == 0 {
        return 0.0;
    }
    // Clipped counts: a hypothesis n-gram only matches as often as the
    // reference contains it.
    let overlap: usize = hc
        .iter()
        .map(|(gram, count)| count.min(rc.get(gram).unwrap_or(&0)))
        .sum();
    f1(overlap as f64, h_total as f64, r_total as f64)
}

fn lcs_len(a: &[String], b: &[String]) -> usize {
    let (short, long) = if a.len() <= b.len() { (a, b) } else { (b, a) };
    if short.is_empty() {
        return 0;
    }
    let mut row = vec![0usize; short.len() + 1];
    for lc in long {
        let mut diag = 0;
        for (j, sc) in short.iter().enumerate() {
            let next = if lc == sc {
                diag + 1
            } else {
                row[j].max(row[j + 1])
            };
            diag = row[j + 1];
            row[j + 1] = next;
        }
    }
    row[short.len()]
}

fn rouge_l_pair(r: &[String], h: &[String]) -> f64 {
    if r.is_empty() || h.is_empty() {
        return 0.0;
    }
    f1(lcs_len(r, h) as f64, h.len() as f64, r.len() as f64)
}

/// Reference positions on one LCS between a reference segment and one
/// candidate segment. The backtrack is deterministic: prefer taking a
/// match, otherwise move where the table is strictly larger, candidate
/// side first.
fn lcs_ref_indices(r: &[String], c: &[String]) -> Vec<usize> {
    let mut table = vec![vec![0usize; c.len() + 1]; r.len() + 1];
    for i in 1..=r.len() {
        for j in 1..=c.len() {
            table[i][j] = if r[i - 1] == c[j - 1] {
                table[i - 1][j - 1] + 1
            } else {
                table[i - 1][j].max(table[i][j - 1])
            };
        }
    }
    let mut indices = Vec::new();
    let (mut i, mut j) = (r.len(), c.len());
    while i > 0 && j > 0 {
        if r[i - 1] == c[j - 1] {
            indices.push(i - 1);
            i -= 1;
            j -= 1;
        } else if table[i][j - 1] > table[i - 1][j] {
            j -= 1;
        } else {
            i -= 1;
        }
    }
    indices.reverse();
    indices
}

/// Summary-level LCS: for each reference segment, union the positions hit
/// by any candidate segment, then score the union size as F1.
fn rouge_lsum_pair(ref_segs: &[Vec<String>], hyp_segs: &[Vec<String>]) -> f64 {
    let m: usize = ref_segs.iter().map(Vec::len).sum();
    let n: usize = hyp_segs.iter().map(Vec::len).sum();
    if m == 0 || n == 0 {
        return 0.0;
    }
    let mut hits = 0usize;
    for r in ref_segs {
        let mut covered = vec![false; r.len()];
        for c in hyp_segs {
            for idx in lcs_ref_indices(r, c) {
                covered[idx] = true;
            }
        }
        hits += covered.iter().filter(|&&b| b).count();
    }
    f1(hits as f64, n as f64, m as f64)
}

fn mean(scores: impl Iterator<Item = f64>, n_pairs: usize) -> f64 {
    if n_pairs == 0 {
        return 0.0;
    }
    scores.sum::<f64>() / n_pairs as f64
}

/// Compute the requested metrics in one pass over the corpus.
pub fn evaluate<R, H>(
    refs: &[R],
    hyps: &[H],
    metrics: &[Metric],
    prep: TextPrep,
) -> Result<EvalScores, MetricsError>
where
    R: AsRef<str>,
    H: AsRef<str>,
{
    check_lengths(refs.len(), hyps.len())?;
    let n_pairs = refs.len();
    let mut scores = EvalScores {
        wer: None,
        cer: None,
        rouge1: None,
        rouge2: None,
        rouge_l: None,
        rouge_lsum: None,
        n_pairs,
    };

    let needs_words = metrics.iter().any(|m| {
        matches!(
            m,
            Metric::Wer | Metric::Rouge1 | Metric::Rouge2 | Metric::RougeL
        )
    });
    let (ref_words, hyp_words): (Vec<Vec<String>>, Vec<Vec<String>>) = if needs_words {
        (
            refs.iter().map(|s| prep_words(s.as_ref(), prep)).collect(),
            hyps.iter().map(|s| prep_words(s.as_ref(), prep)).collect(),
        )
    } else {
        (Vec::new(), Vec::new())
    };

    for metric in metrics {
        match metric {
            Metric::Wer => scores.wer = Some(wer_prepped(&ref_words, &hyp_words)?),
            Metric::Cer => {
                let rc: Vec<Vec<char>> =
                    refs.iter().map(|s| prep_chars(s.as_ref(), prep)).collect();
                let hc: Vec<Vec<char>> =
                    hyps.iter().map(|s| prep_chars(s.as_ref(), prep)).collect();
                scores.cer = Some(cer_prepped(&rc, &hc)?);
            }
            Metric::Rouge1 => {
                scores.rouge1 = Some(mean(
                    ref_words
                        .iter()
                        .zip(&hyp_words)
                        .map(|(r, h)| rouge_n_pair(r, h, 1)),
                    n_pairs,
                ))
            }
            Metric::Rouge2 => {
                scores.rouge2 = Some(mean(
                    ref_words
                        .iter()
                        .zip(&hyp_words)
                        .map(|(r, h)| rouge_n_pair(r, h, 2)),
                    n_pairs,
                ))
            }
            Metric::RougeL => {
                scores.rouge_l = Some(mean(
                    ref_words
                        .iter()
                        .zip(&hyp_words)
                        .map(|(r, h)| rouge_l_pair(r, h)),
                    n_pairs,
                ))
            }
            Metric::RougeLsum => {
                let rs: Vec<Vec<Vec<String>>> = refs
                    .iter()
                    .map(|s| prep_segments(s.as_ref(), prep))
                    .collect();
                let hs: Vec<Vec<Vec<String>>> = hyps
                    .iter()
                    .map(|s| prep_segments(s.as_ref(), prep))
                    .collect();
                scores.rouge_lsum = Some(mean(
                    rs.iter().zip(&hs).map(|(r, h)| rouge_lsum_pair(r, h)),
                    n_pairs,
                ));
            }
        }
    }
    Ok(scores)
}

/// Word error rate over normalized text: total word edits over total
/// reference words.
pub fn wer<R: AsRef<str>, H: AsRef<str>>(refs: &[R], hyps: &[H]) -> Result<f64, MetricsError> {
    Ok(evaluate(refs, hyps, &[Metric::Wer], TextPrep::Normalized)?
        .wer
        .expect("requested metric is present"))
}

/// Character error rate over normalized text, spaces included.
pub fn cer<R: AsRef<str>, H: AsRef<str>>(refs: &[R], hyps: &[H]) -> Result<f64, MetricsError> {
    Ok(evaluate(refs, hyps, &[Metric::Cer], TextPrep::Normalized)?
        .cer
        .expect("requested metric is present"))
}

/// Mean n-gram F1 with clipped counts, over normalized text. `n` must be
/// at least 1.
pub fn rouge_n<R: AsRef<str>, H: AsRef<str>>(
    refs: &[R],
    hyps: &[H],
    n: usize,
) -> Result<f64, MetricsError> {
    assert!(n >= 1, "n-gram order must be at least 1");
    check_lengths(refs.len(), hyps.len())?;
    let rw: Vec<Vec<String>> = refs
        .iter()
        .map(|s| prep_words(s.as_ref(), TextPrep::Normalized))
        .collect();
    let hw: Vec<Vec<String>> = hyps
        .iter()
        .map(|s| prep_words(s.as_ref(), TextPrep::Normalized))
        .collect();
    Ok(mean(
        rw.iter().zip(&hw).map(|(r, h)| rouge_n_pair(r, h, n)),
        refs.len(),
    ))
}

/// Mean LCS F1 over normalized text.
pub fn rouge_l<R: AsRef<str>, H: AsRef<str>>(refs: &[R], hyps: &[H]) -> Result<f64, MetricsError> {
    Ok(evaluate(refs, hyps, &[Metric::RougeL], TextPrep::Normalized)?
        .rouge_l
        .expect("requested metric is present"))
}

/// Mean summary-level LCS F1 over normalized text, with segments split on
/// newlines before normalization. Equals [`rouge_l`] when no input
/// contains a newline.
pub fn rouge_lsum<R: AsRef<str>, H: AsRef<str>>(
    refs: &[R],
    hyps: &[H],
) -> Result<f64, MetricsError> {
    Ok(evaluate(refs, hyps, &[Metric::RougeLsum], TextPrep::Normalized)?
        .rouge_lsum
        .expect("requested metric is present"))
}
