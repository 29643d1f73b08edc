/* C interface to the komori lexical-proximity toolkit. */

#ifndef KOMORI_H
#define KOMORI_H

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

// ROUGE variant selector for [`komori_rouge`].
typedef enum KomoriRougeVariant {
  KomoriRougeVariant_Rouge1 = 0,
  KomoriRougeVariant_Rouge2 = 1,
  KomoriRougeVariant_RougeL = 2,
  KomoriRougeVariant_RougeLsum = 3,
} KomoriRougeVariant;

// Result of a fallible call.
typedef enum KomoriStatus {
  KomoriStatus_Ok = 0,
  // A required pointer argument was null.
  KomoriStatus_NullArgument = 1,
  // An input string was not valid UTF-8.
  KomoriStatus_InvalidUtf8 = 2,
  // Both words were empty, so no normalized distance exists.
  KomoriStatus_BothEmpty = 3,
  // The operation needs a non-empty lexicon.
  KomoriStatus_EmptyLexicon = 4,
  // A reference text was empty after preparation.
  KomoriStatus_EmptyReference = 5,
  // An argument was outside its documented range.
  KomoriStatus_InvalidArgument = 6,
} KomoriStatus;

// Opaque fuzzy-lookup index built from a lexicon.
typedef struct KomoriIndex KomoriIndex;

// Opaque set of normalized words for one language.
typedef struct KomoriLexicon KomoriLexicon;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

// Library version as a static string; do not free.
const char *komori_version(void);

// Human-readable description of a status code, as a static string; do not
// free.
const char *komori_status_message(enum KomoriStatus status);

// Release a string returned by this library. Null is a no-op.
//
// # Safety
// `s` must be a pointer previously returned in an out-parameter of this
// library (or null) and must not be used afterwards.
void komori_string_free(char *s);

// Normalize a sentence into the toolkit's canonical form.
//
// On success `*out` receives a newly allocated string; release it with
// [`komori_string_free`].
//
// # Safety
// `raw` must be a valid NUL-terminated string and `out` a writable
// pointer.
enum KomoriStatus komori_normalize(const char *raw, char **out);

// Edit distance between two words, counted in Unicode scalars.
//
// # Safety
// `a` and `b` must be valid NUL-terminated strings and `out_distance` a
// writable pointer.
enum KomoriStatus komori_levenshtein(const char *a, const char *b, size_t *out_distance);

// Length-normalized edit distance in `[0, 100]`.
//
// # Safety
// `a` and `b` must be valid NUL-terminated strings and `out_distance` a
// writable pointer.
enum KomoriStatus komori_normalized_distance(const char *a, const char *b, double *out_distance);

// Word similarity in percent: `100 - normalized distance`.
//
// # Safety
// `a` and `b` must be valid NUL-terminated strings and `out_similarity` a
// writable pointer.
enum KomoriStatus komori_similarity(const char *a, const char *b, double *out_similarity);

// Create an empty lexicon labeled with a language identifier.
//
// Returns null when `language` is null or not UTF-8. Release with
// [`komori_lexicon_free`].
//
// # Safety
// `language` must be a valid NUL-terminated string or null.
struct KomoriLexicon *komori_lexicon_new(const char *language);

// Normalize a sentence and add its words to the lexicon.
//
// # Safety
// `lexicon` must be a live handle from [`komori_lexicon_new`] with no
// concurrent access, and `sentence` a valid NUL-terminated string.
enum KomoriStatus komori_lexicon_add_sentence(struct KomoriLexicon *lexicon, const char *sentence);

// Number of distinct words in the lexicon; 0 for a null handle.
//
// # Safety
// `lexicon` must be a live handle or null.
size_t komori_lexicon_len(const struct KomoriLexicon *lexicon);

// Whether the lexicon contains `word` exactly (after the caller's own
// normalization). Returns 1, 0, or -1 on error.
//
// # Safety
// `lexicon` must be a live handle or null, and `word` a valid
// NUL-terminated string.
int komori_lexicon_contains(const struct KomoriLexicon *lexicon, const char *word);

// Release a lexicon handle. Null is a no-op.
//
// # Safety
// `lexicon` must be a handle from [`komori_lexicon_new`] (or null) that
// is not used afterwards.
void komori_lexicon_free(struct KomoriLexicon *lexicon);

// Build a fuzzy-lookup index over a lexicon's current words.
//
// The index holds a snapshot: later lexicon changes do not show through.
// Release with [`komori_index_free`].
//
// # Safety
// `lexicon` must be a live handle and `out` a writable pointer.
enum KomoriStatus komori_index_build(const struct KomoriLexicon *lexicon, struct KomoriIndex **out);

// Number of indexed words; 0 for a null handle.
//
// # Safety
// `index` must be a live handle or null.
size_t komori_index_len(const struct KomoriIndex *index);

// Distance evaluations the index has performed so far (building plus
// queries); 0 for a null handle.
//
// # Safety
// `index` must be a live handle or null.
uint64_t komori_index_distance_evals(const struct KomoriIndex *index);

// Best indexed word at least `min_similarity` percent similar to `word`.
//
// On success `*out_found` says whether any candidate qualified. When it
// did, `*out_word` receives a newly allocated string (release with
// [`komori_string_free`]) and the distance and similarity land in their
// pointers; when not, `*out_word` is set to null.
//
// # Safety
// `index` must be a live handle, `word` a valid NUL-terminated string,
// and the out-pointers writable.
enum KomoriStatus komori_index_best_similar(const struct KomoriIndex *index,
                                            const char *word,
                                            double min_similarity,
                                            bool *out_found,
                                            char **out_word,
                                            size_t *out_distance,
                                            double *out_similarity);

// Number of indexed words within raw edit distance `radius` of `word`.
//
// # Safety
// `index` must be a live handle, `word` a valid NUL-terminated string,
// and `out_count` writable.
enum KomoriStatus komori_index_count_within(const struct KomoriIndex *index,
                                            const char *word,
                                            size_t radius,
                                            size_t *out_count);

// Release an index handle. Null is a no-op.
//
// # Safety
// `index` must be a handle from [`komori_index_build`] (or null) that is
// not used afterwards.
void komori_index_free(struct KomoriIndex *index);

// Token and covered-token counts for one sentence under exact lexicon
// coverage.
//
// # Safety
// `lexicon` must be a live handle, `sentence` a valid NUL-terminated
// string, and the out-pointers writable.
enum KomoriStatus komori_coverage_exact(const struct KomoriLexicon *lexicon,
                                        const char *sentence,
                                        size_t *out_tokens,
                                        size_t *out_matched);

// Token and covered-token counts for one sentence under fuzzy coverage
// with a similarity floor.
//
// # Safety
// `index` must be a live handle, `sentence` a valid NUL-terminated
// string, and the out-pointers writable.
enum KomoriStatus komori_coverage_fuzzy(const struct KomoriIndex *index,
                                        const char *sentence,
                                        double min_similarity,
                                        size_t *out_tokens,
                                        size_t *out_matched);

// Corpus word error rate over `len` reference/hypothesis pairs.
//
// With `raw` false, text is normalized first; otherwise it is compared
// as whitespace-split input.
//
// # Safety
// `refs` and `hyps` must each point to `len` valid NUL-terminated
// strings, and `out_score` must be writable.
enum KomoriStatus komori_wer(const char *const *refs,
                             const char *const *hyps,
                             size_t len,
                             bool raw,
                             double *out_score);

// Corpus character error rate over `len` reference/hypothesis pairs.
//
// # Safety
// `refs` and `hyps` must each point to `len` valid NUL-terminated
// strings, and `out_score` must be writable.
enum KomoriStatus komori_cer(const char *const *refs,
                             const char *const *hyps,
                             size_t len,
                             bool raw,
                             double *out_score);

// Mean ROUGE F1 of the chosen variant over `len` pairs.
//
// # Safety
// `refs` and `hyps` must each point to `len` valid NUL-terminated
// strings, and `out_score` must be writable.
enum KomoriStatus komori_rouge(const char *const *refs,
                               const char *const *hyps,
                               size_t len,
                               enum KomoriRougeVariant variant,
                               bool raw,
                               double *out_score);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* KOMORI_H */
