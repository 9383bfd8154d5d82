#ifndef LAMMULT_H
#define LAMMULT_H

/* Generated by cbindgen from crates/ffi/src/lib.rs; do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

typedef enum LmStatus {
  LM_STATUS_OK = 0,
  LM_STATUS_NULL_POINTER = 1,
  LM_STATUS_INVALID_UTF8 = 2,
  LM_STATUS_PARSE_ERROR = 3,
  LM_STATUS_INVALID_ARGUMENT = 4,
  /**
   * The run did not halt within its fuel; out-parameters that carry a
   * step count are still written.
   */
  LM_STATUS_FUEL_EXHAUSTED = 5,
  /**
   * A cross-check found a disagreement; the report is still written.
   */
  LM_STATUS_MISMATCH = 6,
  LM_STATUS_PANIC = 7,
} LmStatus;

typedef enum LmMachine {
  LM_MACHINE_PUSH_ENTER = 0,
  LM_MACHINE_EVAL_APPLY = 1,
  LM_MACHINE_STG = 2,
} LmMachine;

/**
 * Opaque handle to an immutable term.
 */
typedef struct LmTerm LmTerm;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Parses a NUL-terminated UTF-8 term into `*out`.
 *
 * # Safety
 * `src` must be a valid C string and `out` a valid pointer.
 */
enum LmStatus lm_term_parse(const char *src, struct LmTerm **out);

/**
 * Releases a term handle. Null is ignored.
 *
 * # Safety
 * `t` must come from this library and not be used afterwards.
 */
void lm_term_free(struct LmTerm *t);

/**
 * Prints a term in the concrete syntax accepted by `lm_term_parse`.
 *
 * # Safety
 * `t` must be a live handle and `out` a valid pointer.
 */
enum LmStatus lm_term_print(const struct LmTerm *t, char **out);

/**
 * Releases a string returned by this library. Null is ignored.
 *
 * # Safety
 * `s` must come from this library and not be used afterwards.
 */
void lm_string_free(char *s);

/**
 * Alpha-equivalence of two terms.
 *
 * # Safety
 * Both handles must be live and `out` valid.
 */
enum LmStatus lm_term_alpha_eq(const struct LmTerm *a, const struct LmTerm *b, bool *out);

/**
 * Runs `machine` on `t`. On halt writes the unloaded term to `*out` and
 * returns `LM_STATUS_OK`; otherwise `*out` is set to null and
 * `LM_STATUS_FUEL_EXHAUSTED` is returned. `steps` may be null.
 *
 * # Safety
 * `t` must be live, `out` valid, `steps` valid or null.
 */
enum LmStatus lm_eval(const struct LmTerm *t,
                      enum LmMachine machine,
                      uint64_t fuel,
                      struct LmTerm **out,
                      uint64_t *steps);

/**
 * Writes the transition trace as newline-terminated JSON lines. Returns
 * `LM_STATUS_FUEL_EXHAUSTED` (with the trace written) if the run did not
 * halt.
 *
 * # Safety
 * `t` must be live and `out` valid.
 */
enum LmStatus lm_trace_json(const struct LmTerm *t,
                            enum LmMachine machine,
                            uint64_t fuel,
                            char **out);

/**
 * Cross-checks all machines, the derivation stages and the reference
 * reducer, writing the report as JSON.
 *
 * # Safety
 * `t` must be live and `out` valid.
 */
enum LmStatus lm_compare_json(const struct LmTerm *t, uint64_t fuel, char **out);

/**
 * Runs the derivation stages and writes their comparison as JSON.
 *
 * # Safety
 * `t` must be live and `out` valid.
 */
enum LmStatus lm_stages_json(const struct LmTerm *t, uint64_t fuel, char **out);

/**
 * Differentially tests `count` generated terms and writes the summary as
 * JSON.
 *
 * # Safety
 * `out` must be valid.
 */
enum LmStatus lm_fuzz_json(size_t count,
                           size_t max_size,
                           uint64_t fuel,
                           uint64_t seed,
                           bool closed,
                           char **out);

/**
 * Generates a random term, deterministic in its arguments.
 *
 * # Safety
 * `out` must be valid.
 */
enum LmStatus lm_gen_term(uint64_t seed, size_t max_size, bool closed, struct LmTerm **out);

/**
 * Message for the most recent failure on this thread, or an empty string.
 * Valid until the next call into this library on the same thread.
 */
const char *lm_last_error(void);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* LAMMULT_H */
