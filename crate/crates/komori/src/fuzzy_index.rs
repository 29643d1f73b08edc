//! BK-tree index over a lexicon for fuzzy word lookup.
//!
//! Words live in a metric tree keyed by Levenshtein distance, so a radius
//! query only descends into subtrees the triangle inequality cannot rule
//! out. Node visits use the banded distance with an early cutoff: a node
//! whose distance exceeds `radius + max child edge` can neither match nor
//! route the search, so its exact distance is never finished.

use std::collections::BTreeMap;
use std::sync::atomic::{AtomicU64, Ordering};

use thiserror::Error;

use crate::editdist::{levenshtein_seq, PreparedWord};
use crate::lexicon::Lexicon;

#[derive(Debug, Error, Clone, Copy, PartialEq, Eq)]
pub enum FuzzyIndexError {
    /// An index over no words could never answer a query.
    #[error("cannot build a fuzzy index over an empty lexicon")]
    EmptyLexicon,
}

/// One hit from a fuzzy lookup.
#[derive(Debug, Clone, PartialEq)]
pub struct FuzzyMatch {
    /// The lexicon word that matched.
    pub word: String,
    /// Raw edit distance between query and word.
    pub distance: usize,
    /// `100 - normalized distance`, in `[0, 100]`.
    pub similarity: f64,
}

struct Node {
    word: String,
    chars: Vec<char>,
    /// Edge distance to each child subtree root.
    children: BTreeMap<usize, usize>,
}

/// Fuzzy lookup index over one lexicon.
///
/// Queries take `&self` and are safe to run concurrently; the only mutable
/// state is the instrumentation counter, which is atomic.
pub struct BkTree {
    nodes: Vec<Node>,
    max_word_len: usize,
    distance_evals: AtomicU64,
}

fn similarity_of(distance: usize, query_len: usize, word_len: usize) -> f64 {
    let longest = query_len.max(word_len);
    100.0 - distance as f64 / longest as f64 * 100.0
}

impl BkTree {
    /// Index every word of `lexicon`. Insertion order is the lexicon's
    /// sorted order, so equal lexicons always produce equal trees.
    pub fn build(lexicon: &Lexicon) -> Result<Self, FuzzyIndexError> {
        if lexicon.is_empty() {
            return Err(FuzzyIndexError::EmptyLexicon);
        }
        let mut tree = BkTree {
            nodes: Vec::with_capacity(lexicon.len()),
            max_word_len: 0,
            distance_evals: AtomicU64::new(0),
        };
        for word in lexicon.words() {
            tree.insert(word);
        }
        Ok(tree)
    }

    fn insert(&mut self, word: &str) {
        let chars: Vec<char> = word.chars().collect();
        self.max_word_len = self.max_word_len.max(chars.len());
        if self.nodes.is_empty() {
            self.nodes.push(Node {
                word: word.to_string(),
                chars,
                children: BTreeMap::new(),
            });
            return;
        }
        let mut cur = 0usize;
        loop {
            self.distance_evals.fetch_add(1, Ordering::Relaxed);
            let d = levenshtein_seq(&self.nodes[cur].chars, &chars);
            if d == 0 {
                return;
            }
            match self.nodes[cur].children.get(&d) {
                Some(&child) => cur = child,
                None => {
                    let idx = self.nodes.len();
                    self.nodes.push(Node {
                        word: word.to_string(),
                        chars,
                        children: BTreeMap::new(),
                    });
                    self.nodes[cur].children.insert(d, idx);
                    return;
                }
            }
        }
    }

    /// Number of indexed words.
    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    /// Length of the longest indexed word, in scalars.
    pub fn max_word_len(&self) -> usize {
        self.max_word_len
    }

    /// Total distance evaluations since construction or the last reset,
    /// counting both tree building and queries.
    pub fn distance_evals(&self) -> u64 {
        self.distance_evals.load(Ordering::Relaxed)
    }

    pub fn reset_distance_evals(&self) {
        self.distance_evals.store(0, Ordering::Relaxed);
    }

    /// Every word within raw edit distance `radius` of `word`, sorted by
    /// distance, then alphabetically.
    pub fn query_radius(&self, word: &str, radius: usize) -> Vec<FuzzyMatch> {
        let query = PreparedWord::new(word);
        let mut matches = Vec::new();
        let mut stack = vec![0usize];
        while let Some(idx) = stack.pop() {
            let node = &self.nodes[idx];
            let max_edge = node.children.keys().next_back().copied().unwrap_or(0);
            let cutoff = radius.saturating_add(max_edge);
            self.distance_evals.fetch_add(1, Ordering::Relaxed);
            // Beyond the cutoff the node is no match and every child edge
            // falls outside [d - radius, d + radius]: skip the subtree.
            let Some(d) = query.bounded_chars(&node.chars, cutoff) else {
                continue;
            };
            if d <= radius {
                matches.push(FuzzyMatch {
                    word: node.word.clone(),
                    distance: d,
                    similarity: similarity_of(d, query.len(), node.chars.len()),
                });
            }
            let window = d.saturating_sub(radius)..=d.saturating_add(radius);
            for (_, &child) in node.children.range(window) {
                stack.push(child);
            }
        }
        matches.sort_by(|a, b| {
            a.distance
                .cmp(&b.distance)
                .then_with(|| a.word.cmp(&b.word))
        });
        matches
    }

    /// Best match with similarity at least `min_similarity` percent, or
    /// `None`. Ties go to the higher similarity, then the shorter word,
    /// then alphabetical order.
    ///
    /// A similarity floor bounds the useful search radius: `sim >= s`
    /// forces `distance <= (100 - s)/s * |query|`, so only that radius is
    /// searched.
    pub fn best_similar(&self, word: &str, min_similarity: f64) -> Option<FuzzyMatch> {
        let query_len = word.chars().count();
        if query_len == 0 {
            return None;
        }
        let radius = self.radius_for(query_len, min_similarity);
        let mut best: Option<FuzzyMatch> = None;
        for cand in self.query_radius(word, radius) {
            if !(cand.similarity >= min_similarity) {
                continue;
            }
            let better = match &best {
                None => true,
                Some(b) => {
                    cand.similarity > b.similarity
                        || (cand.similarity == b.similarity
                            && (cand.word.chars().count(), cand.word.as_str())
                                < (b.word.chars().count(), b.word.as_str()))
                }
            };
            if better {
                best = Some(cand);
            }
        }
        best
    }

    /// Largest radius a candidate could have while still reaching
    /// `min_similarity`, capped by the largest distance that can occur at
    /// all. Integer stepping sidesteps float-division edge rounding.
    fn radius_for(&self, query_len: usize, min_similarity: f64) -> usize {
        let cap = self.max_word_len.max(query_len);
        if min_similarity <= 0.0 {
            return cap;
        }
        let budget = (100.0 - min_similarity) * query_len as f64;
        let mut radius = 0usize;
        while radius < cap && min_similarity * (radius + 1) as f64 <= budget {
            radius += 1;
        }
        radius
    }
}
