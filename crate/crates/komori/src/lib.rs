//! Corpus-mining toolkit for closely related, low-resource language pairs.
//!
//! The pieces fit together in a pipeline:
//!
//! 1. [`text_norm`] puts all text into one canonical form.
//! 2. [`lexicon`] loads Swadesh-style concept lists and per-language word
//!    sets.
//! 3. [`editdist`] and [`lexstat`] turn word pairs into normalized
//!    distances and whole languages into a distance matrix.
//! 4. [`fuzzy_index`] and [`miner`] filter a donor corpus down to the
//!    sentences a target-language lexicon covers, exactly or fuzzily.
//! 5. [`metrics`] scores system output (WER, CER, ROUGE) to measure what
//!    the filtered data bought.
//!
//! The `komori` binary exposes each stage as a subcommand.

pub mod editdist;
pub mod fuzzy_index;
pub mod lexicon;
pub mod lexstat;
pub mod metrics;
pub mod miner;
pub mod text_norm;

pub use editdist::{levenshtein, normalized_distance, similarity, EditCost};
pub use fuzzy_index::{BkTree, FuzzyMatch};
pub use lexicon::{ConceptList, LanguageId, Lexicon};
pub use lexstat::{distance_matrix, DistanceMatrix};
pub use metrics::{EvalScores, Metric, TextPrep};
pub use miner::{FilterConfig, FilterMode, FilterRecord};
pub use text_norm::{normalize, NormalizedText};
