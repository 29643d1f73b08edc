//! C ABI over the komori toolkit.
//!
//! Conventions:
//!
//! - Fallible calls return a [`KomoriStatus`]; `out` pointers are written
//!   only on [`KomoriStatus::Ok`].
//! - Strings cross the boundary as NUL-terminated UTF-8. Strings handed
//!   out by this library belong to the caller and must be released with
//!   [`komori_string_free`]; strings passed in are only borrowed.
//! - [`KomoriLexicon`] and [`KomoriIndex`] are opaque handles released
//!   with their `_free` functions and must not be used afterwards. They
//!   are safe to share across threads for concurrent reads only.
//!
//! The matching header is generated into `include/komori.h` at build time.

use std::ffi::{c_char, c_int, CStr, CString};
use std::ptr;

use komori::editdist;
use komori::fuzzy_index::BkTree;
use komori::lexicon::{LanguageId, Lexicon};
use komori::metrics::{self, Metric, MetricsError, TextPrep};
use komori::text_norm;

/// Result of a fallible call.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum KomoriStatus {
    Ok = 0,
    /// A required pointer argument was null.
    NullArgument = 1,
    /// An input string was not valid UTF-8.
    InvalidUtf8 = 2,
    /// Both words were empty, so no normalized distance exists.
    BothEmpty = 3,
    /// The operation needs a non-empty lexicon.
    EmptyLexicon = 4,
    /// A reference text was empty after preparation.
    EmptyReference = 5,
    /// An argument was outside its documented range.
    InvalidArgument = 6,
}

/// ROUGE variant selector for [`komori_rouge`].
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum KomoriRougeVariant {
    Rouge1 = 0,
    Rouge2 = 1,
    RougeL = 2,
    RougeLsum = 3,
}

/// Opaque set of normalized words for one language.
pub struct KomoriLexicon {
    inner: Lexicon,
}

/// Opaque fuzzy-lookup index built from a lexicon.
pub struct KomoriIndex {
    inner: BkTree,
}

unsafe fn borrow_str<'a>(ptr: *const c_char) -> Result<&'a str, KomoriStatus> {
    if ptr.is_null() {
        return Err(KomoriStatus::NullArgument);
    }
    CStr::from_ptr(ptr)
        .to_str()
        .map_err(|_| KomoriStatus::InvalidUtf8)
}

unsafe fn borrow_str_array<'a>(
    ptr: *const *const c_char,
    len: usize,
) -> Result<Vec<&'a str>, KomoriStatus> {
    if len > 0 && ptr.is_null() {
        return Err(KomoriStatus::NullArgument);
    }
    let mut items = Vec::with_capacity(len);
    for i in 0..len {
        items.push(borrow_str(*ptr.add(i))?);
    }
    Ok(items)
}

unsafe fn write_out<T>(out: *mut T, value: T) -> KomoriStatus {
    if out.is_null() {
        return KomoriStatus::NullArgument;
    }
    out.write(value);
    KomoriStatus::Ok
}

fn metrics_status(err: MetricsError) -> KomoriStatus {
    match err {
        MetricsError::EmptyReference { .. } => KomoriStatus::EmptyReference,
        MetricsError::LengthMismatch { .. } => KomoriStatus::InvalidArgument,
    }
}

fn prep_of(raw: bool) -> TextPrep {
    if raw {
        TextPrep::Raw
    } else {
        TextPrep::Normalized
    }
}

/// Library version as a static string; do not free.
#[no_mangle]
pub extern "C" fn komori_version() -> *const c_char {
    const VERSION: &CStr =
        match CStr::from_bytes_with_nul(concat!(env!("CARGO_PKG_VERSION"), "\0").as_bytes()) {
            Ok(v) => v,
            Err(_) => panic!("version string contains no NUL"),
        };
    VERSION.as_ptr()
}

/// Human-readable description of a status code, as a static string; do not
/// free.
#[no_mangle]
pub extern "C" fn komori_status_message(status: KomoriStatus) -> *const c_char {
    let message: &CStr = match status {
        KomoriStatus::Ok => c"ok",
        KomoriStatus::NullArgument => c"a required pointer argument was null",
        KomoriStatus::InvalidUtf8 => c"an input string was not valid UTF-8",
        KomoriStatus::BothEmpty => c"both words were empty",
        KomoriStatus::EmptyLexicon => c"the lexicon is empty",
        KomoriStatus::EmptyReference => c"a reference text was empty after preparation",
        KomoriStatus::InvalidArgument => c"an argument was outside its documented range",
    };
    message.as_ptr()
}

/// Release a string returned by this library. Null is a no-op.
///
/// # Safety
/// `s` must be a pointer previously returned in an out-parameter of this
/// library (or null) and must not be used afterwards.
#[no_mangle]
pub unsafe extern "C" fn komori_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}

/// Normalize a sentence into the toolkit's canonical form.
///
/// On success `*out` receives a newly allocated string; release it with
/// [`komori_string_free`].
///
/// # Safety
/// `raw` must be a valid NUL-terminated string and `out` a writable
/// pointer.
#[no_mangle]
pub unsafe extern "C" fn komori_normalize(
    raw: *const c_char,
    out: *mut *mut c_char,
) -> KomoriStatus {
    let raw = match borrow_str(raw) {
        Ok(s) => s,
        Err(status) => return status,
    };
    let normalized = text_norm::normalize(raw).normalized;
    let owned = CString::new(normalized).expect("normalized text contains no NUL");
    write_out(out, owned.into_raw())
}

/// Edit distance between two words, counted in Unicode scalars.
///
/// # Safety
/// `a` and `b` must be valid NUL-terminated strings and `out_distance` a
/// writable pointer.
#[no_mangle]
pub unsafe extern "C" fn komori_levenshtein(
    a: *const c_char,
    b: *const c_char,
    out_distance: *mut usize,
) -> KomoriStatus {
    let (a, b) = match (borrow_str(a), borrow_str(b)) {
        (Ok(a), Ok(b)) => (a, b),
        (Err(status), _) | (_, Err(status)) => return status,
    };
    write_out(out_distance, editdist::levenshtein(a, b))
}

/// Length-normalized edit distance in `[0, 100]`.
///
/// # Safety
/// `a` and `b` must be valid NUL-terminated strings and `out_distance` a
/// writable pointer.
#[no_mangle]
pub unsafe extern "C" fn komori_normalized_distance(
    a: *const c_char,
    b: *const c_char,
    out_distance: *mut f64,
) -> KomoriStatus {
    let (a, b) = match (borrow_str(a), borrow_str(b)) {
        (Ok(a), Ok(b)) => (a, b),
        (Err(status), _) | (_, Err(status)) => return status,
    };
    match editdist::normalized_distance(a, b) {
        Ok(d) => write_out(out_distance, d),
        Err(_) => KomoriStatus::BothEmpty,
    }
}

/// Word similarity in percent: `100 - normalized distance`.
///
/// # Safety
/// `a` and `b` must be valid NUL-terminated strings and `out_similarity` a
/// writable pointer.
#[no_mangle]
pub unsafe extern "C" fn komori_similarity(
    a: *const c_char,
    b: *const c_char,
    out_similarity: *mut f64,
) -> KomoriStatus {
    let (a, b) = match (borrow_str(a), borrow_str(b)) {
        (Ok(a), Ok(b)) => (a, b),
        (Err(status), _) | (_, Err(status)) => return status,
    };
    match editdist::similarity(a, b) {
        Ok(s) => write_out(out_similarity, s),
        Err(_) => KomoriStatus::BothEmpty,
    }
}

/// Create an empty lexicon labeled with a language identifier.
///
/// Returns null when `language` is null or not UTF-8. Release with
/// [`komori_lexicon_free`].
///
/// # Safety
/// `language` must be a valid NUL-terminated string or null.
#[no_mangle]
pub unsafe extern "C" fn komori_lexicon_new(language: *const c_char) -> *mut KomoriLexicon {
    match borrow_str(language) {
        Ok(language) => Box::into_raw(Box::new(KomoriLexicon {
            inner: Lexicon::new(LanguageId::new(language)),
        })),
        Err(_) => ptr::null_mut(),
    }
}

/// Normalize a sentence and add its words to the lexicon.
///
/// # Safety
/// `lexicon` must be a live handle from [`komori_lexicon_new`] with no
/// concurrent access, and `sentence` a valid NUL-terminated string.
#[no_mangle]
pub unsafe extern "C" fn komori_lexicon_add_sentence(
    lexicon: *mut KomoriLexicon,
    sentence: *const c_char,
) -> KomoriStatus {
    if lexicon.is_null() {
        return KomoriStatus::NullArgument;
    }
    let sentence = match borrow_str(sentence) {
        Ok(s) => s,
        Err(status) => return status,
    };
    (*lexicon).inner.add_sentence(sentence);
    KomoriStatus::Ok
}

/// Number of distinct words in the lexicon; 0 for a null handle.
///
/// # Safety
/// `lexicon` must be a live handle or null.
#[no_mangle]
pub unsafe extern "C" fn komori_lexicon_len(lexicon: *const KomoriLexicon) -> usize {
    if lexicon.is_null() {
        return 0;
    }
    (*lexicon).inner.len()
}

/// Whether the lexicon contains `word` exactly (after the caller's own
/// normalization). Returns 1, 0, or -1 on error.
///
/// # Safety
/// `lexicon` must be a live handle or null, and `word` a valid
/// NUL-terminated string.
#[no_mangle]
pub unsafe extern "C" fn komori_lexicon_contains(
    lexicon: *const KomoriLexicon,
    word: *const c_char,
) -> c_int {
    if lexicon.is_null() {
        return -1;
    }
    match borrow_str(word) {
        Ok(word) => c_int::from((*lexicon).inner.contains(word)),
        Err(_) => -1,
    }
}

/// Release a lexicon handle. Null is a no-op.
///
/// # Safety
/// `lexicon` must be a handle from [`komori_lexicon_new`] (or null) that
/// is not used afterwards.
#[no_mangle]
pub unsafe extern "C" fn komori_lexicon_free(lexicon: *mut KomoriLexicon) {
    if !lexicon.is_null() {
        drop(Box::from_raw(lexicon));
    }
}

/// Build a fuzzy-lookup index over a lexicon's current words.
///
/// The index holds a snapshot: later lexicon changes do not show through.
/// Release with [`komori_index_free`].
///
/// # Safety
/// `lexicon` must be a live handle and `out` a writable pointer.
#[no_mangle]
pub unsafe extern "C" fn komori_index_build(
    lexicon: *const KomoriLexicon,
    out: *mut *mut KomoriIndex,
) -> KomoriStatus {
    if lexicon.is_null() {
        return KomoriStatus::NullArgument;
    }
    match BkTree::build(&(*lexicon).inner) {
        Ok(tree) => write_out(out, Box::into_raw(Box::new(KomoriIndex { inner: tree }))),
        Err(_) => KomoriStatus::EmptyLexicon,
    }
}

/// Number of indexed words; 0 for a null handle.
///
/// # Safety
/// `index` must be a live handle or null.
#[no_mangle]
pub unsafe extern "C" fn komori_index_len(index: *const KomoriIndex) -> usize {
    if index.is_null() {
        return 0;
    }
    (*index).inner.len()
}

/// Distance evaluations the index has performed so far (building plus
/// queries); 0 for a null handle.
///
/// # Safety
/// `index` must be a live handle or null.
#[no_mangle]
pub unsafe extern "C" fn komori_index_distance_evals(index: *const KomoriIndex) -> u64 {
    if index.is_null() {
        return 0;
    }
    (*index).inner.distance_evals()
}

/// Best indexed word at least `min_similarity` percent similar to `word`.
///
/// On success `*out_found` says whether any candidate qualified. When it
/// did, `*out_word` receives a newly allocated string (release with
/// [`komori_string_free`]) and the distance and similarity land in their
/// pointers; when not, `*out_word` is set to null.
///
/// # Safety
/// `index` must be a live handle, `word` a valid NUL-terminated string,
/// and the out-pointers writable.
#[no_mangle]
pub unsafe extern "C" fn komori_index_best_similar(
    index: *const KomoriIndex,
    word: *const c_char,
    min_similarity: f64,
    out_found: *mut bool,
    out_word: *mut *mut c_char,
    out_distance: *mut usize,
    out_similarity: *mut f64,
) -> KomoriStatus {
    if index.is_null() {
        return KomoriStatus::NullArgument;
    }
    let word = match borrow_str(word) {
        Ok(w) => w,
        Err(status) => return status,
    };
    if out_found.is_null() || out_word.is_null() || out_distance.is_null() || out_similarity.is_null()
    {
        return KomoriStatus::NullArgument;
    }
    if !(0.0..=100.0).contains(&min_similarity) {
        return KomoriStatus::InvalidArgument;
    }
    match (*index).inner.best_similar(word, min_similarity) {
        Some(hit) => {
            let owned = CString::new(hit.word).expect("lexicon words contain no NUL");
            out_found.write(true);
            out_word.write(owned.into_raw());
            out_distance.write(hit.distance);
            out_similarity.write(hit.similarity);
        }
        None => {
            out_found.write(false);
            out_word.write(ptr::null_mut());
            out_distance.write(0);
            out_similarity.write(0.0);
        }
    }
    KomoriStatus::Ok
}

/// Number of indexed words within raw edit distance `radius` of `word`.
///
/// # Safety
/// `index` must be a live handle, `word` a valid NUL-terminated string,
/// and `out_count` writable.
#[no_mangle]
pub unsafe extern "C" fn komori_index_count_within(
    index: *const KomoriIndex,
    word: *const c_char,
    radius: usize,
    out_count: *mut usize,
) -> KomoriStatus {
    if index.is_null() {
        return KomoriStatus::NullArgument;
    }
    let word = match borrow_str(word) {
        Ok(w) => w,
        Err(status) => return status,
    };
    write_out(out_count, (*index).inner.query_radius(word, radius).len())
}

/// Release an index handle. Null is a no-op.
///
/// # Safety
/// `index` must be a handle from [`komori_index_build`] (or null) that is
/// not used afterwards.
#[no_mangle]
pub unsafe extern "C" fn komori_index_free(index: *mut KomoriIndex) {
    if !index.is_null() {
        drop(Box::from_raw(index));
    }
}

/// Token and covered-token counts for one sentence under exact lexicon
/// coverage.
///
/// # Safety
/// `lexicon` must be a live handle, `sentence` a valid NUL-terminated
/// string, and the out-pointers writable.
#[no_mangle]
pub unsafe extern "C" fn komori_coverage_exact(
    lexicon: *const KomoriLexicon,
    sentence: *const c_char,
    out_tokens: *mut usize,
    out_matched: *mut usize,
) -> KomoriStatus {
    if lexicon.is_null() {
        return KomoriStatus::NullArgument;
    }
    let sentence = match borrow_str(sentence) {
        Ok(s) => s,
        Err(status) => return status,
    };
    if out_tokens.is_null() || out_matched.is_null() {
        return KomoriStatus::NullArgument;
    }
    let text = text_norm::normalize(sentence);
    let matched = text
        .token_strs()
        .filter(|tok| (*lexicon).inner.contains(tok))
        .count();
    out_tokens.write(text.tokens.len());
    out_matched.write(matched);
    KomoriStatus::Ok
}

/// Token and covered-token counts for one sentence under fuzzy coverage
/// with a similarity floor.
///
/// # Safety
/// `index` must be a live handle, `sentence` a valid NUL-terminated
/// string, and the out-pointers writable.
#[no_mangle]
pub unsafe extern "C" fn komori_coverage_fuzzy(
    index: *const KomoriIndex,
    sentence: *const c_char,
    min_similarity: f64,
    out_tokens: *mut usize,
    out_matched: *mut usize,
) -> KomoriStatus {
    if index.is_null() {
        return KomoriStatus::NullArgument;
    }
    let sentence = match borrow_str(sentence) {
        Ok(s) => s,
        Err(status) => return status,
    };
    if out_tokens.is_null() || out_matched.is_null() {
        return KomoriStatus::NullArgument;
    }
    if !(0.0..=100.0).contains(&min_similarity) {
        return KomoriStatus::InvalidArgument;
    }
    let text = text_norm::normalize(sentence);
    let matched = text
        .token_strs()
        .filter(|tok| (*index).inner.best_similar(tok, min_similarity).is_some())
        .count();
    out_tokens.write(text.tokens.len());
    out_matched.write(matched);
    KomoriStatus::Ok
}

/// Corpus word error rate over `len` reference/hypothesis pairs.
///
/// With `raw` false, text is normalized first; otherwise it is compared
/// as whitespace-split input.
///
/// # Safety
/// `refs` and `hyps` must each point to `len` valid NUL-terminated
/// strings, and `out_score` must be writable.
#[no_mangle]
pub unsafe extern "C" fn komori_wer(
    refs: *const *const c_char,
    hyps: *const *const c_char,
    len: usize,
    raw: bool,
    out_score: *mut f64,
) -> KomoriStatus {
    let (refs, hyps) = match (borrow_str_array(refs, len), borrow_str_array(hyps, len)) {
        (Ok(r), Ok(h)) => (r, h),
        (Err(status), _) | (_, Err(status)) => return status,
    };
    match metrics::evaluate(&refs, &hyps, &[Metric::Wer], prep_of(raw)) {
        Ok(scores) => write_out(out_score, scores.wer.expect("requested metric is present")),
        Err(err) => metrics_status(err),
    }
}

/// Corpus character error rate over `len` reference/hypothesis pairs.
///
/// # Safety
/// `refs` and `hyps` must each point to `len` valid NUL-terminated
/// strings, and `out_score` must be writable.
#[no_mangle]
pub unsafe extern "C" fn komori_cer(
    refs: *const *const c_char,
    hyps: *const *const c_char,
    len: usize,
    raw: bool,
    out_score: *mut f64,
) -> KomoriStatus {
    let (refs, hyps) = match (borrow_str_array(refs, len), borrow_str_array(hyps, len)) {
        (Ok(r), Ok(h)) => (r, h),
        (Err(status), _) | (_, Err(status)) => return status,
    };
    match metrics::evaluate(&refs, &hyps, &[Metric::Cer], prep_of(raw)) {
        Ok(scores) => write_out(out_score, scores.cer.expect("requested metric is present")),
        Err(err) => metrics_status(err),
    }
}

/// Mean ROUGE F1 of the chosen variant over `len` pairs.
///
/// # Safety
/// `refs` and `hyps` must each point to `len` valid NUL-terminated
/// strings, and `out_score` must be writable.
#[no_mangle]
pub unsafe extern "C" fn komori_rouge(
    refs: *const *const c_char,
    hyps: *const *const c_char,
    len: usize,
    variant: KomoriRougeVariant,
    raw: bool,
    out_score: *mut f64,
) -> KomoriStatus {
    let (refs, hyps) = match (borrow_str_array(refs, len), borrow_str_array(hyps, len)) {
        (Ok(r), Ok(h)) => (r, h),
        (Err(status), _) | (_, Err(status)) => return status,
    };
    let metric = match variant {
        KomoriRougeVariant::Rouge1 => Metric::Rouge1,
        KomoriRougeVariant::Rouge2 => Metric::Rouge2,
        KomoriRougeVariant::RougeL => Metric::RougeL,
        KomoriRougeVariant::RougeLsum => Metric::RougeLsum,
    };
    match metrics::evaluate(&refs, &hyps, &[metric], prep_of(raw)) {
        Ok(scores) => {
            let score = match metric {
                Metric::Rouge1 => scores.rouge1,
                Metric::Rouge2 => scores.rouge2,
                Metric::RougeL => scores.rouge_l,
                _ => scores.rouge_lsum,
            };
            write_out(out_score, score.expect("requested metric is present"))
        }
        Err(err) => metrics_status(err),
    }
}
