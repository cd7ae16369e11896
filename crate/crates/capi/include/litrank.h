#ifndef LITRANK_H
#define LITRANK_H

/* Generated by cbindgen from the litrank-capi crate. Do not edit by hand. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

/**
 * Result of every fallible call. The numeric values of `Config`, `Io`, and
 * `Data` match the process exit codes of the `litrank` binary.
 */
typedef enum LitrankStatus {
  /**
   * Success; out-parameters are valid.
   */
  LitrankStatus_Ok = 0,
  /**
   * Invalid parameters (bad method name, out-of-range knob).
   */
  LitrankStatus_Config = 2,
  /**
   * The file system got in the way (missing file, unwritable path).
   */
  LitrankStatus_Io = 3,
  /**
   * The inputs were readable but malformed or unusable.
   */
  LitrankStatus_Data = 4,
  /**
   * A required pointer argument was NULL.
   */
  LitrankStatus_NullArgument = 5,
  /**
   * A string argument was not valid UTF-8.
   */
  LitrankStatus_InvalidUtf8 = 6,
  /**
   * An internal invariant failed; the library caught a panic.
   */
  LitrankStatus_Panic = 7,
} LitrankStatus;

/**
 * An ingested corpus: the cleaned article table plus its reference list.
 */
typedef struct LitrankDataset LitrankDataset;

/**
 * A computed ranking, ordered best-first, with an id index for lookups.
 */
typedef struct LitrankRanking LitrankRanking;

/**
 * Ranking knobs, passable by value. Zero or negative `epsilon` disables
 * the early stop (the iteration count alone decides).
 */
typedef struct LitrankParams {
  /**
   * Damping factor in [0, 1].
   */
  double damping;
  /**
   * Citation-age decay exponent, >= 0; 0 disables aging.
   */
  double decay_exponent;
  /**
   * Fixed iteration count, >= 1.
   */
  uint32_t iterations;
  /**
   * Early-stop threshold on the max per-iteration change; <= 0 disables.
   */
  double epsilon;
  /**
   * Venue ensemble weight, >= 0.
   */
  double alpha;
  /**
   * Author ensemble weight, >= 0.
   */
  double beta;
  /**
   * Affiliation ensemble weight, >= 0 (only the `ewpr-all` method uses it).
   */
  double gamma;
} LitrankParams;

/**
 * Pairwise agreement between a ranking and a judged-pairs file.
 */
typedef struct LitrankAccuracy {
  /**
   * Fraction of evaluable pairs the ranking ordered correctly, in [0, 1];
   * ties earn half credit.
   */
  double accuracy;
  /**
   * Pairs where both articles had scores.
   */
  uint64_t evaluated;
  /**
   * Pairs skipped because at least one side was missing.
   */
  uint64_t excluded;
} LitrankAccuracy;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Message describing the most recent failure on the calling thread, or an
 * empty string when nothing failed yet. The pointer stays valid until the
 * next failing litrank call on the same thread; copy it if you keep it.
 */
const char *litrank_last_error_message(void);

/**
 * Library version as a static string; never NULL, never freed.
 */
const char *litrank_version(void);

/**
 * Ingests the TSV corpus in `dir` (`papers.tsv`, `references.tsv`, and the
 * optional author/affiliation/field/venue files) into a new dataset
 * handle. A staged directory produced by `litrank ingest` works too — the
 * file layout is the same. Rows that fail validation are dropped, exactly
 * as the command-line ingest does.
 *
 * # Safety
 * `dir` must be NULL or a NUL-terminated path; `out` must be NULL or
 * writable. The returned handle must be released with
 * [`litrank_dataset_free`].
 */
enum LitrankStatus litrank_dataset_open(const char *dir, struct LitrankDataset **out);

/**
 * Releases a dataset handle. NULL is a no-op.
 *
 * # Safety
 * `ds` must be NULL or a handle from [`litrank_dataset_open`] that has not
 * been freed yet.
 */
void litrank_dataset_free(struct LitrankDataset *ds);

/**
 * Number of articles kept by ingestion; 0 for NULL.
 *
 * # Safety
 * `ds` must be NULL or a live dataset handle.
 */
uint64_t litrank_dataset_article_count(const struct LitrankDataset *ds);

/**
 * Number of raw reference rows read; 0 for NULL.
 *
 * # Safety
 * `ds` must be NULL or a live dataset handle.
 */
uint64_t litrank_dataset_reference_count(const struct LitrankDataset *ds);

/**
 * The reference parameterization — the same defaults the binary uses.
 */
struct LitrankParams litrank_params_default(void);

/**
 * Computes a ranking over `ds`. `method` is one of `"pr"`, `"wpr"`,
 * `"ewpr"`, or `"ewpr-all"`; NULL `params` means the defaults. Entries
 * come back ordered best-first.
 *
 * # Safety
 * `ds` must be a live dataset handle; `method` NULL or NUL-terminated;
 * `params` NULL or pointing at a valid struct; `out` writable. The
 * returned handle must be released with [`litrank_ranking_free`].
 */
enum LitrankStatus litrank_rank(const struct LitrankDataset *ds,
                                const char *method,
                                const struct LitrankParams *params,
                                struct LitrankRanking **out);

/**
 * Releases a ranking handle. NULL is a no-op.
 *
 * # Safety
 * `r` must be NULL or a handle from [`litrank_rank`] not yet freed.
 */
void litrank_ranking_free(struct LitrankRanking *r);

/**
 * Number of entries in the ranking; 0 for NULL.
 *
 * # Safety
 * `r` must be NULL or a live ranking handle.
 */
uint64_t litrank_ranking_len(const struct LitrankRanking *r);

/**
 * Fetches the entry at `index` (0 is the best-ranked article). The id
 * pointer borrows from the handle and stays valid until the handle is
 * freed. Either out-pointer may be NULL to skip that field.
 *
 * # Safety
 * `r` must be a live ranking handle; non-NULL out-pointers writable.
 */
enum LitrankStatus litrank_ranking_entry(const struct LitrankRanking *r,
                                         uint64_t index,
                                         const char **out_id,
                                         double *out_score);

/**
 * Looks up one article's score by id; unknown ids are a `Data` error.
 *
 * # Safety
 * `r` must be a live ranking handle; `article_id` NULL or NUL-terminated;
 * `out_score` writable or NULL.
 */
enum LitrankStatus litrank_ranking_score(const struct LitrankRanking *r,
                                         const char *article_id,
                                         double *out_score);

/**
 * Writes the ranking as `article_id<TAB>score` lines, best first — the
 * same format the `litrank rank` command emits.
 *
 * # Safety
 * `r` must be a live ranking handle; `path` NULL or NUL-terminated.
 */
enum LitrankStatus litrank_ranking_write_tsv(const struct LitrankRanking *r, const char *path);

/**
 * Scores the ranking against `better<TAB>worse` pairs read from
 * `pairs_path`. A file with no evaluable pairs is a `Data` error.
 *
 * # Safety
 * `r` must be a live ranking handle; `pairs_path` NULL or NUL-terminated;
 * `out` writable or NULL.
 */
enum LitrankStatus litrank_evaluate(const struct LitrankRanking *r,
                                    const char *pairs_path,
                                    struct LitrankAccuracy *out);

/**
 * The citation-age discount on one edge: 1 when the citing year does not
 * exceed the cited article's peak year, otherwise
 * `1 / ln(e + age)^decay_exponent`. Pure; useful for spot checks.
 */
double litrank_impact_weight(int32_t citing_year, int32_t peak_year, double decay_exponent);

/**
 * Jaro similarity between two strings, in [0, 1]. Returns -1.0 when
 * either pointer is NULL or not valid UTF-8.
 *
 * # Safety
 * `a` and `b` must each be NULL or NUL-terminated.
 */
double litrank_jaro_similarity(const char *a, const char *b);

#ifdef __cplusplus
} // extern "C"
#endif // __cplusplus

#endif /* LITRANK_H */
