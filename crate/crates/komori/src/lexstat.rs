//! Aggregate lexical distance between languages over a concept list.
//!
//! Per concept, the distance between two languages is the minimum
//! normalized edit distance over the cross product of their attested
//! variants. Per language pair, it is the unweighted mean over the concepts
//! attested on both sides; concepts missing on either side contribute
//! nothing, which equals mean-imputing them.

use thiserror::Error;

use crate::editdist;
use crate::lexicon::{ConceptEntry, ConceptList, LanguageId};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum LexstatError {
    /// No concept carries forms for both languages, so their distance is
    /// undefined.
    #[error("languages {a:?} and {b:?} share no concept attested on both sides")]
    NoComparablePairs { a: String, b: String },
    /// A language was requested that the list does not carry.
    #[error("unknown language {language:?}")]
    UnknownLanguage { language: String },
}

/// Distance between two languages on a single concept.
///
/// `None` when either side has no attested variant; otherwise the minimum
/// normalized distance over all variant pairings, so synonym noise cannot
/// inflate the score.
pub fn concept_distance(
    entry: &ConceptEntry,
    lang_a: &LanguageId,
    lang_b: &LanguageId,
) -> Option<f64> {
    let a = entry.variants(lang_a);
    let b = entry.variants(lang_b);
    if a.is_empty() || b.is_empty() {
        return None;
    }
    let mut best = f64::INFINITY;
    for va in a {
        for vb in b {
            let d = editdist::normalized_distance(va, vb)
                .expect("concept variants are non-empty words");
            if d < best {
                best = d;
            }
        }
    }
    Some(best)
}

/// Mean concept distance between two languages, with the number of
/// concepts that supported it.
pub fn language_distance(
    list: &ConceptList,
    lang_a: &LanguageId,
    lang_b: &LanguageId,
) -> Result<(f64, usize), LexstatError> {
    for lang in [lang_a, lang_b] {
        if !list.languages().contains(lang) {
            return Err(LexstatError::UnknownLanguage {
                language: lang.as_str().to_string(),
            });
        }
    }
    let mut sum = 0.0;
    let mut count = 0usize;
    for entry in list.entries() {
        if let Some(d) = concept_distance(entry, lang_a, lang_b) {
            sum += d;
            count += 1;
        }
    }
    if count == 0 {
        return Err(LexstatError::NoComparablePairs {
            a: lang_a.as_str().to_string(),
            b: lang_b.as_str().to_string(),
        });
    }
    Ok((sum / count as f64, count))
}

/// Symmetric pairwise distance matrix over every language in a list.
#[derive(Debug, Clone, PartialEq)]
pub struct DistanceMatrix {
    list_name: String,
    languages: Vec<LanguageId>,
    values: Vec<f64>,
    support: Vec<usize>,
}

impl DistanceMatrix {
    pub fn list_name(&self) -> &str {
        &self.list_name
    }

    pub fn languages(&self) -> &[LanguageId] {
        &self.languages
    }

    pub fn index_of(&self, language: &LanguageId) -> Option<usize> {
        self.languages.iter().position(|l| l == language)
    }

    /// Distance between languages `i` and `j`, in `[0, 100]`.
    pub fn value(&self, i: usize, j: usize) -> f64 {
        self.values[i * self.languages.len() + j]
    }

    /// Number of concepts the `(i, j)` distance was averaged over.
    pub fn support(&self, i: usize, j: usize) -> usize {
        self.support[i * self.languages.len() + j]
    }

    /// Lower-triangular TSV rendering with six-decimal values.
    pub fn to_tsv(&self) -> String {
        let mut out = String::from("language");
        for language in &self.languages {
            out.push('\t');
            out.push_str(language.as_str());
        }
        out.push('\n');
        for (i, language) in self.languages.iter().enumerate() {
            out.push_str(language.as_str());
            for j in 0..=i {
                out.push('\t');
                out.push_str(&format!("{:.6}", self.value(i, j)));
            }
            out.push('\n');
        }
        out
    }
}

/// Compute the full matrix for a list.
///
/// Fails as soon as any language pair (including a language against
/// itself) has no comparable concepts.
pub fn distance_matrix(list: &ConceptList) -> Result<DistanceMatrix, LexstatError> {
    let languages = list.languages().to_vec();
    let n = languages.len();
    let mut values = vec![0.0; n * n];
    let mut support = vec![0usize; n * n];
    for i in 0..n {
        for j in 0..=i {
            let (d, count) = language_distance(list, &languages[i], &languages[j])?;
            values[i * n + j] = d;
            values[j * n + i] = d;
            support[i * n + j] = count;
            support[j * n + i] = count;
        }
    }
    Ok(DistanceMatrix {
        list_name: list.name().to_string(),
        languages,
        values,
        support,
    })
}
