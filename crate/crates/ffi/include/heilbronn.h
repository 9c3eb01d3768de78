#ifndef HEILBRONN_H
#define HEILBRONN_H

/* Generated by cbindgen from src/lib.rs; do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

typedef enum HbStatus {
  HB_STATUS_OK = 0,
  HB_STATUS_INVALID_ARGUMENT = 1,
  HB_STATUS_PRECONDITION = 2,
  HB_STATUS_LIMIT_EXCEEDED = 3,
  HB_STATUS_NULL_POINTER = 4,
  HB_STATUS_INTERNAL = 5,
} HbStatus;

typedef enum HbReason {
  /**
   * The criterion applies; see the witness.
   */
  HB_REASON_NONE = 0,
  HB_REASON_NO_PRIME_PAIR = 1,
  HB_REASON_ALL_PAIRS_HAVE_ROOTS = 2,
  HB_REASON_NO_RESIDUE_ADMISSIBLE_U = 3,
  HB_REASON_P_TOO_SMALL = 4,
} HbReason;

/**
 * Opaque monic integer polynomial.
 */
typedef struct HbPolynomial HbPolynomial;

typedef struct HbWitness {
  uint64_t p;
  uint64_t n;
  uint64_t q1;
  uint64_t q2;
  uint64_t u;
  uint64_t v;
  uint64_t a;
  uint64_t b;
  uint64_t g;
} HbWitness;

typedef struct HbVerdict {
  bool applies;
  enum HbReason reason;
  /**
   * Zeroed unless `applies`.
   */
  struct HbWitness witness;
} HbVerdict;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Message for the last failed call on this thread, or null. Valid until
 * the next call into this library on the same thread.
 */
const char *hb_last_error(void);

/**
 * Library version as a static NUL-terminated string.
 */
const char *hb_version(void);

/**
 * Parses comma-separated coefficients `a0,a1,...,a_{n-1}` of a monic polynomial.
 *
 * # Safety
 * `text` must be a NUL-terminated string; `out` must be valid for writes.
 */
enum HbStatus hb_polynomial_parse(const char *text, struct HbPolynomial **out);

/**
 * Builds a polynomial from `len` coefficients `a0..a_{len-1}`.
 *
 * # Safety
 * `coeffs` must point to `len` readable values; `out` must be valid for writes.
 */
enum HbStatus hb_polynomial_from_coeffs(const int64_t *coeffs,
                                        size_t len,
                                        struct HbPolynomial **out);

/**
 * # Safety
 * `poly` must be null or a handle not yet freed.
 */
void hb_polynomial_free(struct HbPolynomial *poly);

/**
 * Degree of `poly`, or 0 for a null handle.
 *
 * # Safety
 * `poly` must be null or a live handle.
 */
size_t hb_polynomial_degree(const struct HbPolynomial *poly);

/**
 * # Safety
 * `poly` must be a live handle; `out` must be valid for writes.
 */
enum HbStatus hb_polynomial_is_eisenstein(const struct HbPolynomial *poly, uint64_t p, bool *out);

/**
 * # Safety
 * `poly` must be a live handle; `out` must be valid for writes.
 */
enum HbStatus hb_polynomial_has_root_mod(const struct HbPolynomial *poly, uint64_t q, bool *out);

/**
 * Criterion verdict for `poly` at `p`, auxiliary primes up to `pair_bound`.
 *
 * # Safety
 * `poly` must be a live handle; `out` must be valid for writes.
 */
enum HbStatus hb_check(const struct HbPolynomial *poly,
                       uint64_t p,
                       uint64_t pair_bound,
                       struct HbVerdict *out);

/**
 * Minimal `p = u*q1 + v*q2` with `q1 ∤ u`, `q2 ∤ v`; `*found` is false
 * when none exists.
 *
 * # Safety
 * `found`, `u` and `v` must be valid for writes.
 */
enum HbStatus hb_decompose(uint64_t p,
                           uint64_t q1,
                           uint64_t q2,
                           bool *found,
                           uint64_t *u,
                           uint64_t *v);

/**
 * # Safety
 * `out` must be valid for writes.
 */
enum HbStatus hb_is_nth_power_residue(uint64_t a, uint64_t p, uint64_t n, bool *out);

/**
 * JSON density report; free with [`hb_string_free`].
 *
 * # Safety
 * `out` must be valid for writes.
 */
enum HbStatus hb_density_json(uint64_t p, uint32_t n, char **out);

/**
 * JSON lower-bound report; free with [`hb_string_free`].
 *
 * # Safety
 * `out` must be valid for writes.
 */
enum HbStatus hb_bounds_json(uint64_t p, uint32_t n, char **out);

/**
 * JSON survey over `(-x, x]^n`. `samples == 0` enumerates exhaustively
 * (up to `enumeration_cap` candidates); otherwise samples with `seed`.
 *
 * # Safety
 * `out` must be valid for writes.
 */
enum HbStatus hb_survey_json(uint64_t p,
                             uint32_t n,
                             uint64_t x,
                             uint64_t pair_bound,
                             uint64_t samples,
                             uint64_t seed,
                             uint64_t enumeration_cap,
                             char **out);

/**
 * # Safety
 * `s` must be null or a string returned by this library, not yet freed.
 */
void hb_string_free(char *s);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* HEILBRONN_H */
