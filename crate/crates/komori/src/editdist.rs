//! Levenshtein edit distance and its length-normalized form.
//!
//! All distances are computed over Unicode scalar values, never bytes.
//! Inputs are expected to be NFC-normalized upstream (see [`crate::text_norm`]);
//! the functions here compare whatever scalars they are handed.

use std::collections::HashMap;

use thiserror::Error;

#[derive(Debug, Error, Clone, Copy, PartialEq, Eq)]
pub enum DistanceError {
    /// Normalization divides by the longest word length, which is zero when
    /// both words are empty.
    #[error("cannot normalize the distance between two empty words")]
    BothEmpty,
}

/// Raw and normalized cost of transforming one word into another.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EditCost {
    /// Minimum number of single-character insertions, deletions, and
    /// substitutions.
    pub raw: usize,
    /// `raw / max(|a|, |b|) * 100`, in `[0, 100]`. 0 means identical words.
    pub normalized: f64,
}

/// Levenshtein distance between two strings, counted in Unicode scalars.
pub fn levenshtein(a: &str, b: &str) -> usize {
    let a: Vec<char> = a.chars().collect();
    let b: Vec<char> = b.chars().collect();
    levenshtein_seq(&a, &b)
}

/// Levenshtein distance between two sequences of comparable items.
///
/// This is the word-level workhorse for WER (items are words) and the
/// character-level one for everything else (items are chars).
pub fn levenshtein_seq<T: PartialEq>(a: &[T], b: &[T]) -> usize {
    // Shorter sequence as columns keeps the row allocation small.
    let (short, long) = if a.len() <= b.len() { (a, b) } else { (b, a) };
    if short.is_empty() {
        return long.len();
    }
    let mut row: Vec<usize> = (0..=short.len()).collect();
    for (i, lc) in long.iter().enumerate() {
        let mut diag = row[0];
        row[0] = i + 1;
        for (j, sc) in short.iter().enumerate() {
            let cost = usize::from(lc != sc);
            let next = (row[j] + 1).min(row[j + 1] + 1).min(diag + cost);
            diag = row[j + 1];
            row[j + 1] = next;
        }
    }
    row[short.len()]
}

/// Banded Levenshtein: `Some(d)` iff the distance `d` is at most `k`,
/// `None` as soon as the distance provably exceeds `k`.
///
/// Agrees exactly with [`levenshtein`] whenever the distance is within the
/// bound; only cells within the `|i - j| <= k` band are ever touched.
pub fn levenshtein_bounded(a: &str, b: &str, k: usize) -> Option<usize> {
    let a: Vec<char> = a.chars().collect();
    let b: Vec<char> = b.chars().collect();
    levenshtein_bounded_seq(&a, &b, k)
}

/// Sequence form of [`levenshtein_bounded`].
pub fn levenshtein_bounded_seq<T: PartialEq>(a: &[T], b: &[T], k: usize) -> Option<usize> {
    const INF: usize = usize::MAX / 2;
    let (short, long) = if a.len() <= b.len() { (a, b) } else { (b, a) };
    let n = short.len();
    let m = long.len();
    // Length difference is a lower bound on the distance.
    if m - n > k {
        return None;
    }
    if n == 0 {
        return Some(m);
    }
    let mut prev: Vec<usize> = vec![INF; n + 1];
    let mut cur: Vec<usize> = vec![INF; n + 1];
    for (j, cell) in prev.iter_mut().enumerate().take(n.min(k) + 1) {
        *cell = j;
    }
    for i in 1..=m {
        let lo = i.saturating_sub(k);
        let hi = n.min(i + k);
        if lo > hi {
            return None;
        }
        // Cells just outside the window must read as unreachable; the window
        // shifts by at most one per row, so clearing the two edge cells is
        // enough to keep stale values from leaking in.
        if lo > 0 {
            cur[lo - 1] = INF;
        }
        if hi < n {
            cur[hi + 1] = INF;
        }
        let mut row_min = INF;
        for j in lo..=hi {
            let best = if j == 0 {
                i
            } else {
                let cost = usize::from(long[i - 1] != short[j - 1]);
                (cur[j - 1] + 1).min(prev[j] + 1).min(prev[j - 1] + cost)
            };
            cur[j] = best;
            row_min = row_min.min(best);
        }
        if row_min > k {
            return None;
        }
        std::mem::swap(&mut prev, &mut cur);
    }
    let d = prev[n];
    (d <= k).then_some(d)
}

/// A word preprocessed for repeated distance computations.
///
/// Words of at most 64 scalars are matched with the Myers bit-parallel
/// algorithm, a handful of word-sized operations per scalar of the other
/// string; longer words fall back to the banded DP. Results agree exactly
/// with [`levenshtein`].
pub struct PreparedWord {
    chars: Vec<char>,
    /// Position bitmask per ASCII scalar, indexed directly.
    ascii: Box<[u64; 128]>,
    /// Position bitmasks for everything else.
    wide: HashMap<char, u64>,
}

impl PreparedWord {
    pub fn new(word: &str) -> Self {
        let chars: Vec<char> = word.chars().collect();
        let mut ascii = Box::new([0u64; 128]);
        let mut wide = HashMap::new();
        if chars.len() <= 64 {
            for (i, &c) in chars.iter().enumerate() {
                let bit = 1u64 << i;
                match u32::from(c) {
                    cp if cp < 128 => ascii[cp as usize] |= bit,
                    _ => *wide.entry(c).or_insert(0) |= bit,
                }
            }
        }
        PreparedWord { chars, ascii, wide }
    }

    /// Length in scalars.
    pub fn len(&self) -> usize {
        self.chars.len()
    }

    pub fn is_empty(&self) -> bool {
        self.chars.is_empty()
    }

    fn mask(&self, c: char) -> u64 {
        let cp = u32::from(c);
        if cp < 128 {
            self.ascii[cp as usize]
        } else {
            self.wide.get(&c).copied().unwrap_or(0)
        }
    }

    /// Distance to `other`.
    pub fn distance(&self, other: &str) -> usize {
        let other: Vec<char> = other.chars().collect();
        self.distance_chars(&other)
    }

    /// Distance to an already decoded word.
    pub fn distance_chars(&self, other: &[char]) -> usize {
        let m = self.chars.len();
        if m == 0 {
            return other.len();
        }
        if m > 64 {
            return levenshtein_seq(&self.chars, other);
        }
        let msb = 1u64 << (m - 1);
        let mut pv = !0u64;
        let mut mv = 0u64;
        let mut score = m;
        for &c in other {
            let eq = self.mask(c);
            let xv = eq | mv;
            let xh = ((eq & pv).wrapping_add(pv) ^ pv) | eq;
            let mut ph = mv | !(xh | pv);
            let mh = pv & xh;
            if ph & msb != 0 {
                score += 1;
            }
            if mh & msb != 0 {
                score -= 1;
            }
            ph = (ph << 1) | 1;
            pv = (mh << 1) | !(xv | ph);
            mv = ph & xv;
        }
        score
    }

    /// `Some(d)` iff the distance `d` to `other` is at most `cutoff`.
    pub fn bounded_chars(&self, other: &[char], cutoff: usize) -> Option<usize> {
        if self.chars.len().abs_diff(other.len()) > cutoff {
            return None;
        }
        if self.chars.len() > 64 {
            return levenshtein_bounded_seq(&self.chars, other, cutoff);
        }
        let d = self.distance_chars(other);
        (d <= cutoff).then_some(d)
    }
}

/// Raw and normalized edit cost in one call.
///
/// Errors with [`DistanceError::BothEmpty`] when both words are empty, since
/// the normalization denominator would be zero.
pub fn edit_cost(a: &str, b: &str) -> Result<EditCost, DistanceError> {
    let a: Vec<char> = a.chars().collect();
    let b: Vec<char> = b.chars().collect();
    let longest = a.len().max(b.len());
    if longest == 0 {
        return Err(DistanceError::BothEmpty);
    }
    let raw = levenshtein_seq(&a, &b);
    Ok(EditCost {
        raw,
        normalized: raw as f64 / longest as f64 * 100.0,
    })
}

/// Normalized lexical distance: `levenshtein(a, b) / max(|a|, |b|) * 100`.
///
/// Ranges over `[0, 100]`; 0 means the words are identical, 100 means no
/// aligned character survives.
pub fn normalized_distance(a: &str, b: &str) -> Result<f64, DistanceError> {
    edit_cost(a, b).map(|c| c.normalized)
}

/// Similarity as the complement of the normalized distance: `100 - D`.
///
/// Two identical words score 100; the corpus filters treat "at least 80%"
/// as `similarity >= 80`.
pub fn similarity(a: &str, b: &str) -> Result<f64, DistanceError> {
    normalized_distance(a, b).map(|d| 100.0 - d)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;
    use std::collections::HashMap;

    /// Plain memoized-recursion oracle, independent of the DP above.
    fn oracle_lev(a: &[char], b: &[char]) -> usize {
        fn go(
            a: &[char],
            b: &[char],
            i: usize,
            j: usize,
            memo: &mut HashMap<(usize, usize), usize>,
        ) -> usize {
            if i == 0 {
                return j;
            }
            if j == 0 {
                return i;
            }
            if let Some(&d) = memo.get(&(i, j)) {
                return d;
            }
            let cost = usize::from(a[i - 1] != b[j - 1]);
            let d = (go(a, b, i - 1, j, memo) + 1)
                .min(go(a, b, i, j - 1, memo) + 1)
                .min(go(a, b, i - 1, j - 1, memo) + cost);
            memo.insert((i, j), d);
            d
        }
        go(a, b, a.len(), b.len(), &mut HashMap::new())
    }

    fn all_words(alphabet: &[char], max_len: usize) -> Vec<Vec<char>> {
        let mut words: Vec<Vec<char>> = vec![vec![]];
        let mut frontier: Vec<Vec<char>> = vec![vec![]];
        for _ in 0..max_len {
            let mut next = Vec::new();
            for w in &frontier {
                for &c in alphabet {
                    let mut w2 = w.clone();
                    w2.push(c);
                    next.push(w2);
                }
            }
            words.extend(next.iter().cloned());
            frontier = next;
        }
        words
    }

    #[test]
    fn known_distances() {
        assert_eq!(levenshtein("kitten", "sitting"), 3);
        assert_eq!(levenshtein("", "abc"), 3);
        assert_eq!(levenshtein("abc", ""), 3);
        assert_eq!(levenshtein("djwai", "djwai"), 0);
        assert_eq!(levenshtein("", ""), 0);
        assert_eq!(levenshtein("mbuzi", "puzi"), 2);
    }

    #[test]
    fn counts_scalars_not_bytes() {
        // "é" is two bytes but one scalar.
        assert_eq!(levenshtein("é", "e"), 1);
        assert_eq!(levenshtein("é", "é"), 0);
        // Decomposed form is a different scalar sequence; callers NFC first.
        assert_eq!(levenshtein("\u{65}\u{301}", "\u{e9}"), 2);
    }

    #[test]
    fn normalized_examples() {
        assert!((normalized_distance("abc", "abd").unwrap() - 100.0 / 3.0).abs() < 1e-9);
        assert_eq!(normalized_distance("x", "x").unwrap(), 0.0);
        assert!((normalized_distance("kitten", "sitting").unwrap() - 300.0 / 7.0).abs() < 1e-9);
    }

    #[test]
    fn similarity_examples() {
        assert_eq!(similarity("mimi", "mimi").unwrap(), 100.0);
        assert!((similarity("mbuzi", "puzi").unwrap() - 60.0).abs() < 1e-9);
        assert!((similarity("abcd", "abce").unwrap() - 75.0).abs() < 1e-9);
    }

    #[test]
    fn both_empty_is_an_error() {
        assert_eq!(normalized_distance("", ""), Err(DistanceError::BothEmpty));
        assert_eq!(similarity("", ""), Err(DistanceError::BothEmpty));
        assert_eq!(edit_cost("", ""), Err(DistanceError::BothEmpty));
        // One empty side is fine.
        assert_eq!(normalized_distance("", "abc").unwrap(), 100.0);
    }

    #[test]
    fn edit_cost_invariants() {
        let c = edit_cost("djwai", "djwai").unwrap();
        assert_eq!(c.raw, 0);
        assert_eq!(c.normalized, 0.0);
        let c = edit_cost("abc", "xyz").unwrap();
        assert_eq!(c.raw, 3);
        assert_eq!(c.normalized, 100.0);
    }

    #[test]
    fn dp_matches_oracle_exhaustively() {
        let words = all_words(&['a', 'b', 'c'], 3);
        for x in &words {
            for y in &words {
                assert_eq!(levenshtein_seq(x, y), oracle_lev(x, y));
            }
        }
    }

    #[test]
    fn bounded_matches_full_for_all_small_pairs() {
        let words = all_words(&['a', 'b'], 4);
        for x in &words {
            for y in &words {
                let d = levenshtein_seq(x, y);
                for k in 0..=6 {
                    let got = levenshtein_bounded_seq(x, y, k);
                    if d <= k {
                        assert_eq!(got, Some(d), "{x:?} {y:?} k={k}");
                    } else {
                        assert_eq!(got, None, "{x:?} {y:?} k={k}");
                    }
                }
            }
        }
    }

    #[test]
    fn prepared_matches_dp_for_all_small_pairs() {
        let words = all_words(&['a', 'b', 'c'], 4);
        for x in &words {
            for y in &words {
                let sx: String = x.iter().collect();
                let prepared = PreparedWord::new(&sx);
                let d = levenshtein_seq(x, y);
                assert_eq!(prepared.distance_chars(y), d, "{x:?} vs {y:?}");
                for k in 0..=5 {
                    let want = (d <= k).then_some(d);
                    assert_eq!(prepared.bounded_chars(y, k), want, "{x:?} vs {y:?} k={k}");
                }
            }
        }
    }

    #[test]
    fn prepared_handles_word_size_boundaries() {
        // 64 scalars uses the last bit of the word; 65 takes the DP fallback.
        for len in [63, 64, 65, 80] {
            let a: String = std::iter::repeat('a').take(len).collect();
            let mut b: Vec<char> = a.chars().collect();
            b[len / 2] = 'b';
            b.push('c');
            let prepared = PreparedWord::new(&a);
            assert_eq!(prepared.len(), len);
            assert_eq!(prepared.distance_chars(&b), levenshtein_seq(&prepared.chars, &b));
            assert_eq!(prepared.distance_chars(&b), 2);
            assert_eq!(prepared.bounded_chars(&b, 1), None);
            assert_eq!(prepared.bounded_chars(&b, 2), Some(2));
        }
    }

    fn word_strategy() -> impl Strategy<Value = Vec<char>> {
        proptest::collection::vec(proptest::sample::select(vec!['a', 'b', 'c', 'd', 'é']), 0..12)
    }

    proptest! {
        #[test]
        fn dp_matches_oracle(a in word_strategy(), b in word_strategy()) {
            prop_assert_eq!(levenshtein_seq(&a, &b), oracle_lev(&a, &b));
        }

        #[test]
        fn symmetric(a in word_strategy(), b in word_strategy()) {
            prop_assert_eq!(levenshtein_seq(&a, &b), levenshtein_seq(&b, &a));
        }

        #[test]
        fn identity_of_indiscernibles(a in word_strategy(), b in word_strategy()) {
            prop_assert_eq!(levenshtein_seq(&a, &b) == 0, a == b);
        }

        #[test]
        fn triangle_inequality(a in word_strategy(), b in word_strategy(), c in word_strategy()) {
            let ab = levenshtein_seq(&a, &b);
            let bc = levenshtein_seq(&b, &c);
            let ac = levenshtein_seq(&a, &c);
            prop_assert!(ac <= ab + bc);
        }

        #[test]
        fn prepared_agrees_with_dp(a in word_strategy(), b in word_strategy(), k in 0usize..14) {
            let sa: String = a.iter().collect();
            let prepared = PreparedWord::new(&sa);
            let d = levenshtein_seq(&a, &b);
            prop_assert_eq!(prepared.distance_chars(&b), d);
            prop_assert_eq!(prepared.bounded_chars(&b, k), (d <= k).then_some(d));
        }

        #[test]
        fn bounded_agrees_with_full(a in word_strategy(), b in word_strategy(), k in 0usize..14) {
            let d = levenshtein_seq(&a, &b);
            let got = levenshtein_bounded_seq(&a, &b, k);
            if d <= k {
                prop_assert_eq!(got, Some(d));
            } else {
                prop_assert_eq!(got, None);
            }
        }

        #[test]
        fn normalized_range_and_formula(a in word_strategy(), b in word_strategy()) {
            prop_assume!(!(a.is_empty() && b.is_empty()));
            let sa: String = a.iter().collect();
            let sb: String = b.iter().collect();
            let d = normalized_distance(&sa, &sb).unwrap();
            prop_assert!((0.0..=100.0).contains(&d));
            let expect = levenshtein_seq(&a, &b) as f64 / a.len().max(b.len()) as f64 * 100.0;
            prop_assert!((d - expect).abs() < 1e-12);
            // Similarity is the exact complement.
            prop_assert!((similarity(&sa, &sb).unwrap() - (100.0 - d)).abs() < 1e-12);
        }
    }
}
