/* C API of the egg-beater laboratory. */

#ifndef EGGBEATER_H
#define EGGBEATER_H

#include <stdarg.h>
#include <stdbool.h>
#include <stdint.h>
#include <stdlib.h>

/**
 * Status code of every fallible call.
 */
typedef enum {
  /**
   * Success.
   */
  EB_STATUS_OK = 0,
  /**
   * A required pointer argument was null.
   */
  EB_STATUS_NULL_ARGUMENT = 1,
  /**
   * A string argument was not valid UTF-8.
   */
  EB_STATUS_INVALID_UTF8 = 2,
  /**
   * Word or rational literal failed to parse.
   */
  EB_STATUS_PARSE_ERROR = 3,
  /**
   * Parameters out of range (L, k, delta, grids).
   */
  EB_STATUS_BAD_PARAMS = 4,
  /**
   * The computation failed (domain, degeneracy, singular system, ...).
   */
  EB_STATUS_COMPUTATION_ERROR = 5,
  /**
   * An internal consistency check or oracle disagreed.
   */
  EB_STATUS_INVARIANT_VIOLATION = 6,
} EbStatus;

/**
 * An opaque parameter set (L, k, delta).
 */
typedef struct EbParams EbParams;

/**
 * An opaque parsed word in the free group on V and H.
 */
typedef struct EbWord EbWord;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Message of the most recent error on this thread. The pointer stays valid
 * until the next failing call on the same thread; do not free it.
 */
const char *eb_last_error(void);

/**
 * Parses a word literal such as `"H^2 V^-1 H"` into a new handle.
 *
 * # Safety
 * `text` must be NUL-terminated; `out` must be a valid pointer.
 */
EbStatus eb_word_parse(const char *text, EbWord **out);

/**
 * Releases a word handle. Null is ignored.
 *
 * # Safety
 * `word` must come from [`eb_word_parse`] and not be freed twice.
 */
void eb_word_free(EbWord *word);

/**
 * Builds a parameter set from rational literals, e.g. `L = "5"`,
 * `delta = "1/8"`.
 *
 * # Safety
 * String arguments must be NUL-terminated; `out` must be a valid pointer.
 */
EbStatus eb_params_new(const char *l, uint64_t k, const char *delta, EbParams **out);

/**
 * Releases a parameter handle. Null is ignored.
 *
 * # Safety
 * `params` must come from [`eb_params_new`] and not be freed twice.
 */
void eb_params_free(EbParams *params);

/**
 * Word analysis (schema `eggbeater.word-analysis.v1`) as a JSON string.
 * `k` selects the power used for the traced homotopy class.
 *
 * # Safety
 * `word` must be a live handle; `out_json` must be a valid pointer.
 */
EbStatus eb_word_analysis_json(const EbWord *word, uint64_t k, char **out_json);

/**
 * Fixed-point census with Floer data (schema `eggbeater.floer-table.v1`)
 * as a JSON string.
 *
 * # Safety
 * `word` and `params` must be live handles; `out_json` must be valid.
 */
EbStatus eb_floer_table_json(const EbWord *word, const EbParams *params, char **out_json);

/**
 * Hofer-bound growth scan over the geometric grid
 * `k_min * k_factor^i <= k_max` (schema `eggbeater.growth-scan.v1`) as a
 * JSON string. `l` and `delta` are rational literals.
 *
 * # Safety
 * `word` must be a live handle; strings NUL-terminated; `out_json` valid.
 */
EbStatus eb_growth_scan_json(const EbWord *word,
                             uint64_t k_min,
                             uint64_t k_max,
                             uint64_t k_factor,
                             const char *l,
                             const char *delta,
                             char **out_json);

/**
 * Releases a string returned by this library. Null is ignored.
 *
 * # Safety
 * `s` must come from this library and not be freed twice.
 */
void eb_string_free(char *s);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* EGGBEATER_H */
