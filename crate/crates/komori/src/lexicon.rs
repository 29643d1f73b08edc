//! Concept lists and per-language lexicons.
//!
//! A concept list is a Swadesh-style table: one row per pivot gloss, one
//! column per language, each cell holding zero or more word variants. A
//! lexicon is the flat set of normalized words attested for one language.
//!
//! The TSV interchange format is one header row `gloss<TAB>lang1<TAB>...`
//! followed by one row per concept; variants within a cell are separated by
//! `|` and an empty cell means the concept is unattested.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use thiserror::Error;

use crate::text_norm::{self, NormalizedText};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum LexiconError {
    /// Two rows share a pivot gloss, which would make lookups ambiguous.
    #[error("duplicate gloss {gloss:?}")]
    DuplicateGloss { gloss: String },
    /// A row that cannot be interpreted: wrong column count, empty gloss,
    /// or a variant that normalizes to more than one word.
    #[error("malformed row at line {line}: {reason}")]
    MalformedRow { line: usize, reason: String },
    /// A language was requested that the list does not carry.
    #[error("unknown language {language:?}")]
    UnknownLanguage { language: String },
}

/// Identifier of a language column. Case-sensitive, compared verbatim.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct LanguageId(String);

impl LanguageId {
    pub fn new(id: impl Into<String>) -> Self {
        LanguageId(id.into())
    }

    pub fn as_str(&self) -> &str {
        &self.0
    }
}

impl fmt::Display for LanguageId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

impl From<&str> for LanguageId {
    fn from(s: &str) -> Self {
        LanguageId::new(s)
    }
}

/// One concept row: the pivot gloss plus the attested variants per language.
///
/// Variants are normalized single words; a language with no attested form
/// is simply absent from the map.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ConceptEntry {
    pub gloss: String,
    forms: BTreeMap<LanguageId, Vec<String>>,
}

impl ConceptEntry {
    /// Variants attested for `language`, empty when missing.
    pub fn variants(&self, language: &LanguageId) -> &[String] {
        self.forms.get(language).map_or(&[], Vec::as_slice)
    }

    /// True when at least one variant is attested for `language`.
    pub fn has(&self, language: &LanguageId) -> bool {
        self.forms.contains_key(language)
    }
}

/// One unparsed concept row, as read from a file or built by a caller.
#[derive(Debug, Clone)]
pub struct ConceptRow {
    /// 1-based source line, echoed in errors.
    pub line: usize,
    pub gloss: String,
    /// Raw cells, one per language, `|`-separated variants, empty = missing.
    pub cells: Vec<String>,
}

/// A parsed multilingual concept list.
#[derive(Debug, Clone, PartialEq)]
pub struct ConceptList {
    name: String,
    languages: Vec<LanguageId>,
    entries: Vec<ConceptEntry>,
}

impl ConceptList {
    /// Assemble a list from raw rows.
    ///
    /// Every cell is normalized; variants that normalize to nothing are
    /// dropped (the cell becomes missing if none survive), and a variant
    /// that normalizes to several words is rejected as malformed.
    pub fn from_rows<I>(
        name: impl Into<String>,
        languages: Vec<LanguageId>,
        rows: I,
    ) -> Result<Self, LexiconError>
    where
        I: IntoIterator<Item = ConceptRow>,
    {
        let mut seen = BTreeSet::new();
        let mut entries = Vec::new();
        for row in rows {
            let gloss = row.gloss.trim().to_string();
            if gloss.is_empty() {
                return Err(LexiconError::MalformedRow {
                    line: row.line,
                    reason: "empty gloss".into(),
                });
            }
            if row.cells.len() != languages.len() {
                return Err(LexiconError::MalformedRow {
                    line: row.line,
                    reason: format!(
                        "expected {} language cells, found {}",
                        languages.len(),
                        row.cells.len()
                    ),
                });
            }
            if !seen.insert(gloss.clone()) {
                return Err(LexiconError::DuplicateGloss { gloss });
            }
            let mut forms = BTreeMap::new();
            for (language, cell) in languages.iter().zip(&row.cells) {
                let mut variants = Vec::new();
                for raw in cell.split('|') {
                    let text = text_norm::normalize(raw);
                    match text.tokens.len() {
                        0 => {}
                        1 => variants.push(text.tokens[0].surface.clone()),
                        _ => {
                            return Err(LexiconError::MalformedRow {
                                line: row.line,
                                reason: format!(
                                    "variant {raw:?} for language {language} is not a single word"
                                ),
                            });
                        }
                    }
                }
                if !variants.is_empty() {
                    forms.insert(language.clone(), variants);
                }
            }
            entries.push(ConceptEntry { gloss, forms });
        }
        Ok(ConceptList {
            name: name.into(),
            languages,
            entries,
        })
    }

    /// Parse the TSV interchange format. Blank lines are skipped; the
    /// header's corner cell must read `gloss`.
    pub fn parse_tsv(name: impl Into<String>, text: &str) -> Result<Self, LexiconError> {
        let mut lines = text
            .lines()
            .enumerate()
            .map(|(i, l)| (i + 1, l))
            .filter(|(_, l)| !l.trim().is_empty());
        let Some((header_line, header)) = lines.next() else {
            return Err(LexiconError::MalformedRow {
                line: 1,
                reason: "missing header row".into(),
            });
        };
        let mut columns = header.split('\t');
        if columns.next() != Some("gloss") {
            return Err(LexiconError::MalformedRow {
                line: header_line,
                reason: "header must start with a `gloss` column".into(),
            });
        }
        let mut languages = Vec::new();
        for column in columns {
            let language = LanguageId::new(column);
            if languages.contains(&language) {
                return Err(LexiconError::MalformedRow {
                    line: header_line,
                    reason: format!("duplicate language column {column:?}"),
                });
            }
            languages.push(language);
        }
        if languages.is_empty() {
            return Err(LexiconError::MalformedRow {
                line: header_line,
                reason: "header carries no language columns".into(),
            });
        }
        let mut rows = Vec::new();
        for (line, raw) in lines {
            let mut cells = raw.split('\t').map(str::to_string);
            let gloss = cells.next().unwrap_or_default();
            rows.push(ConceptRow {
                line,
                gloss,
                cells: cells.collect(),
            });
        }
        ConceptList::from_rows(name, languages, rows)
    }

    /// Serialize back to the TSV interchange format.
    ///
    /// Round-trips: parsing the output reproduces the list exactly.
    pub fn to_tsv(&self) -> String {
        let mut out = String::from("gloss");
        for language in &self.languages {
            out.push('\t');
            out.push_str(language.as_str());
        }
        out.push('\n');
        for entry in &self.entries {
            out.push_str(&entry.gloss);
            for language in &self.languages {
                out.push('\t');
                out.push_str(&entry.variants(language).join("|"));
            }
            out.push('\n');
        }
        out
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn languages(&self) -> &[LanguageId] {
        &self.languages
    }

    pub fn entries(&self) -> &[ConceptEntry] {
        &self.entries
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    /// Fraction of concepts with at least one attested variant for
    /// `language`. An empty list counts as zero coverage.
    pub fn coverage(&self, language: &LanguageId) -> Result<f64, LexiconError> {
        if !self.languages.contains(language) {
            return Err(LexiconError::UnknownLanguage {
                language: language.as_str().to_string(),
            });
        }
        if self.entries.is_empty() {
            return Ok(0.0);
        }
        let present = self.entries.iter().filter(|e| e.has(language)).count();
        Ok(present as f64 / self.entries.len() as f64)
    }
}

/// The distinct normalized words attested for one language.
///
/// Words only enter through normalization, so the invariants (single
/// tokens, canonical form) hold by construction. Lookups take `&self` and
/// are safe to share across threads once building is done.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Lexicon {
    language: LanguageId,
    words: BTreeSet<String>,
}

impl Lexicon {
    /// An empty lexicon, to be grown with [`Lexicon::add_sentence`].
    pub fn new(language: LanguageId) -> Self {
        Lexicon {
            language,
            words: BTreeSet::new(),
        }
    }

    /// Collect every token of the given normalized sentences.
    pub fn from_texts<'a, I>(language: LanguageId, texts: I) -> Self
    where
        I: IntoIterator<Item = &'a NormalizedText>,
    {
        Lexicon {
            language,
            words: text_norm::word_set(texts),
        }
    }

    /// Build from raw lines (one sentence or word per line), normalizing
    /// each and keeping all resulting tokens.
    pub fn parse_lines(language: LanguageId, text: &str) -> Self {
        let texts: Vec<NormalizedText> = text.lines().map(text_norm::normalize).collect();
        Lexicon::from_texts(language, &texts)
    }

    /// Normalize one raw sentence and add its tokens.
    pub fn add_sentence(&mut self, raw: &str) {
        for token in text_norm::normalize(raw).tokens {
            self.words.insert(token.surface);
        }
    }

    pub fn language(&self) -> &LanguageId {
        &self.language
    }

    /// Exact membership test; `word` must already be normalized.
    pub fn contains(&self, word: &str) -> bool {
        self.words.contains(word)
    }

    /// Words in lexicographic order.
    pub fn words(&self) -> impl Iterator<Item = &str> {
        self.words.iter().map(String::as_str)
    }

    pub fn len(&self) -> usize {
        self.words.len()
    }

    pub fn is_empty(&self) -> bool {
        self.words.is_empty()
    }
}
