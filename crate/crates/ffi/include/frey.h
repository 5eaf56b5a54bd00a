#ifndef FREY_H
#define FREY_H

/* Generated by cbindgen from src/lib.rs; do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

/**
 * Curve families, in the order W, E5, F5, E13, F13.
 */
typedef enum FreyCurveKind {
  FREY_CURVE_KIND_W = 0,
  FREY_CURVE_KIND_E5 = 1,
  FREY_CURVE_KIND_F5 = 2,
  FREY_CURVE_KIND_E13 = 3,
  FREY_CURVE_KIND_F13 = 4,
} FreyCurveKind;

/**
 * Which invariant `frey_curve_invariant` returns.
 */
typedef enum FreyInvariant {
  FREY_INVARIANT_C4 = 0,
  FREY_INVARIANT_C6 = 1,
  FREY_INVARIANT_DISCRIMINANT = 2,
  FREY_INVARIANT_J = 3,
  FREY_INVARIANT_MODEL = 4,
} FreyInvariant;

/**
 * Outcome of a call. The numeric values are stable.
 */
typedef enum FreyStatus {
  FREY_STATUS_OK = 0,
  /**
   * Bad arguments: null pointers, unknown kinds, degenerate pairs, inadmissible primes.
   */
  FREY_STATUS_INPUT_ERROR = 2,
  /**
   * Missing or malformed data files, or a curve at a prime of bad reduction.
   */
  FREY_STATUS_DATA_ERROR = 3,
  /**
   * A computed step failed to verify.
   */
  FREY_STATUS_VERIFICATION_FAILURE = 4,
  /**
   * A Rust panic was caught at the boundary.
   */
  FREY_STATUS_INTERNAL_ERROR = 5,
} FreyStatus;

typedef enum FreyVerdict {
  FREY_VERDICT_RESOLVED = 0,
  FREY_VERDICT_RESOLVED_EXCEPT_LISTED_P = 1,
  FREY_VERDICT_DATA_MISSING = 2,
  FREY_VERDICT_UNRESOLVED = 3,
} FreyVerdict;

/**
 * A Frey curve at a coprime pair.
 */
typedef struct FreyCurve FreyCurve;

/**
 * A proof trace with its text and JSON renderings.
 */
typedef struct FreyTrace FreyTrace;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Message for the last failed call on this thread; empty after a success. Owned by the library.
 */
const char *frey_last_error(void);

/**
 * # Safety
 * `s` must come from this library and not have been freed.
 */
void frey_string_free(char *s);

/**
 * Builds the curve of `kind` (a `FreyCurveKind` value) at (a, b).
 *
 * # Safety
 * `out` must be valid for writes.
 */
enum FreyStatus frey_curve_new(int32_t kind, int64_t a, int64_t b, struct FreyCurve **out);

/**
 * # Safety
 * `c` must come from `frey_curve_new` and not have been freed.
 */
void frey_curve_free(struct FreyCurve *c);

/**
 * The invariant named by `which` (a `FreyInvariant` value) as text in the power basis of
 * the host field; free with `frey_string_free`.
 *
 * # Safety
 * `c` must be a live handle and `out` valid for writes.
 */
enum FreyStatus frey_curve_invariant(const struct FreyCurve *c, int32_t which, char **out);

/**
 * Trace of Frobenius at slot `index` above the prime `q`: a_𝔮 at good slots, ±1 at multiplicative ones, 0 at additive ones.
 *
 * # Safety
 * `c` must be a live handle and `out` valid for writes.
 */
enum FreyStatus frey_curve_trace(const struct FreyCurve *c,
                                 uint64_t q,
                                 size_t index,
                                 int64_t *out);

/**
 * Conductor exponent at slot `index` above `q` for a solution with coefficient `d`; -1 when the tables leave it open.
 * Slots the tables do not list have exponent 0.
 *
 * # Safety
 * `c` must be a live handle and `out` valid for writes.
 */
enum FreyStatus frey_curve_conductor_exponent(const struct FreyCurve *c,
                                              uint64_t d,
                                              uint64_t q,
                                              size_t index,
                                              int32_t *out);

/**
 * Runs the r = 5 or r = 13 pipeline for x^r + y^r = d z^p.
 *
 * `data_dir` may be null; otherwise every .txt or .hilbert file in it is read as Hilbert
 * eigenvalue data. A trace is produced whatever the verdict; the status reflects loading
 * and argument errors only.
 *
 * # Safety
 * `data_dir` must be null or a NUL-terminated string; `out` must be valid for writes.
 */
enum FreyStatus frey_prove(uint32_t r,
                           uint64_t d,
                           const char *data_dir,
                           bool strict_no_cited,
                           struct FreyTrace **out);

/**
 * The second case (p | z) for d in {1, 2}. `curves_path` may be null to use the bundled tables.
 *
 * # Safety
 * `curves_path` must be null or a NUL-terminated string; `out` must be valid for writes.
 */
enum FreyStatus frey_second_case(uint64_t d, const char *curves_path, struct FreyTrace **out);

/**
 * # Safety
 * `t` must come from this library and not have been freed.
 */
void frey_trace_free(struct FreyTrace *t);

/**
 * # Safety
 * `t` must be a live handle and `out` valid for writes.
 */
enum FreyStatus frey_trace_verdict(const struct FreyTrace *t, enum FreyVerdict *out);

/**
 * Number of computed or cited steps in the trace.
 *
 * # Safety
 * `t` must be a live handle and `out` valid for writes.
 */
enum FreyStatus frey_trace_step_count(const struct FreyTrace *t, size_t *out);

/**
 * The text rendering, owned by the trace and valid until `frey_trace_free`.
 *
 * # Safety
 * `t` must be a live handle or null.
 */
const char *frey_trace_text(const struct FreyTrace *t);

/**
 * The JSON rendering, owned by the trace and valid until `frey_trace_free`.
 *
 * # Safety
 * `t` must be a live handle or null.
 */
const char *frey_trace_json(const struct FreyTrace *t);

/**
 * Process exit code the command-line tool would use for this trace.
 *
 * # Safety
 * `t` must be a live handle or null (null gives 2).
 */
int32_t frey_trace_exit_code(const struct FreyTrace *t);

#ifdef __cplusplus
} // extern "C"
#endif // __cplusplus

#endif /* FREY_H */
