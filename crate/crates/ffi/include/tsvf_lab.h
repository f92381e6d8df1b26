/* Generated by cbindgen from crates/ffi/src/lib.rs. Do not edit. */

#ifndef TSVF_LAB_H
#define TSVF_LAB_H

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

// Result code of every fallible call.
enum TsvfStatus
#if defined(__cplusplus) || __STDC_VERSION__ >= 202311L
  : int32_t
#endif // defined(__cplusplus) || __STDC_VERSION__ >= 202311L
 {
  TSVF_STATUS_OK = 0,
  TSVF_STATUS_NULL_POINTER = 1,
  TSVF_STATUS_INVALID_UTF8 = 2,
  TSVF_STATUS_BUFFER_TOO_SMALL = 3,
  TSVF_STATUS_INVALID_ARGUMENT = 4,
  TSVF_STATUS_PANIC = 5,
  TSVF_STATUS_DIMENSION_MISMATCH = 10,
  TSVF_STATUS_MALFORMED = 11,
  TSVF_STATUS_NOT_HERMITIAN = 12,
  TSVF_STATUS_NOT_CONVERGED = 13,
  TSVF_STATUS_VANISHING_POST_SELECTION = 14,
  TSVF_STATUS_ORTHOGONAL_SELECTIONS = 15,
  TSVF_STATUS_NO_POST_SELECTED_SHOTS = 16,
  TSVF_STATUS_GRID_TOO_NARROW = 17,
  TSVF_STATUS_NO_BRACKETING_COMPLETE_MEASUREMENTS = 18,
  TSVF_STATUS_INTERVENING_RECORD = 19,
  TSVF_STATUS_TIME_COLLISION = 20,
  TSVF_STATUS_SYNTAX_ERROR = 21,
  TSVF_STATUS_OUTCOME_NOT_EIGENVALUE = 22,
  TSVF_STATUS_DUPLICATE_TIMESTAMP = 23,
  TSVF_STATUS_UNKNOWN_OBSERVABLE = 24,
  TSVF_STATUS_INVALID_PROTOCOL = 25,
  TSVF_STATUS_VALIDATION_FAILED = 26,
};
#ifndef __cplusplus
#if __STDC_VERSION__ >= 202311L
typedef enum TsvfStatus TsvfStatus;
#else
typedef int32_t TsvfStatus;
#endif // __STDC_VERSION__ >= 202311L
#endif // __cplusplus

// Hermitian operator handle.
typedef struct TsvfOperator TsvfOperator;

// Pre- and post-selected state pair.
typedef struct TsvfTwoState TsvfTwoState;

// Parsed world file.
typedef struct TsvfWorld TsvfWorld;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

// Copies the calling thread's last error message, NUL-terminated and
// truncated to `capacity`. Returns the full message length in bytes,
// excluding the terminator; 0 when the last call succeeded.
//
// # Safety
// `buffer` must be null or valid for `capacity` bytes.
size_t tsvf_last_error_message(char *buffer, size_t capacity);

// Builds a Hermitian operator from `dim * dim` row-major entries.
//
// # Safety
// `re` and `im` must each point to `dim * dim` doubles; `result` must be
// writable.
TsvfStatus tsvf_operator_new(size_t dim,
                             const double *re,
                             const double *im,
                             struct TsvfOperator **result);

// Built-in observables: `P_A`, `P_B`, `P_C` (dim 3) and `s_x`, `s_y`,
// `s_z`, `s_xi` (dim 2).
//
// # Safety
// `name` must be a NUL-terminated string; `result` must be writable.
TsvfStatus tsvf_operator_builtin(const char *name, struct TsvfOperator **result);

// Lifts `op` onto factor `index` of a tensor product with the given factor
// dimensions.
//
// # Safety
// `op` must be a live handle, `dims` must point to `n_dims` values and
// `result` must be writable.
TsvfStatus tsvf_operator_embed(const struct TsvfOperator *op,
                               size_t index,
                               const size_t *dims,
                               size_t n_dims,
                               struct TsvfOperator **result);

// Dimension of the operator, or 0 for a null handle.
//
// # Safety
// `op` must be null or a live handle.
size_t tsvf_operator_dim(const struct TsvfOperator *op);

// # Safety
// `op` must be null or a handle not yet freed.
void tsvf_operator_free(struct TsvfOperator *op);

// Builds a two-state vector from unnormalized pre- and post-selected
// amplitudes.
//
// # Safety
// All four arrays must hold `dim` doubles; `result` must be writable.
TsvfStatus tsvf_two_state_new(size_t dim,
                              const double *pre_re,
                              const double *pre_im,
                              const double *post_re,
                              const double *post_im,
                              struct TsvfTwoState **result);

// Built-in two-state vectors: `three-box`, `three-box-trivial`, `all-plus`.
//
// # Safety
// `name` must be a NUL-terminated string; `result` must be writable.
TsvfStatus tsvf_two_state_scenario(const char *name, struct TsvfTwoState **result);

// Dimension of the two-state vector, or 0 for a null handle.
//
// # Safety
// `tsv` must be null or a live handle.
size_t tsvf_two_state_dim(const struct TsvfTwoState *tsv);

// # Safety
// `tsv` must be null or a handle not yet freed.
void tsvf_two_state_free(struct TsvfTwoState *tsv);

// ABL outcome distribution: ascending distinct eigenvalues and their
// probabilities.
//
// # Safety
// Handles must be live; `values` and `probabilities` must hold `capacity`
// doubles; `len` must be writable.
TsvfStatus tsvf_abl(const struct TsvfTwoState *tsv,
                    const struct TsvfOperator *observable,
                    double *values,
                    double *probabilities,
                    size_t capacity,
                    size_t *len);

// Complex weak value `<post|op|pre> / <post|pre>`.
//
// # Safety
// Handles must be live; `re` and `im` must be writable.
TsvfStatus tsvf_weak_value(const struct TsvfTwoState *tsv,
                           const struct TsvfOperator *op,
                           double *re,
                           double *im);

// Sets `*found` and, when an outcome is certain within `tolerance`, writes
// it to `*value`.
//
// # Safety
// Handles must be live; `found` and `value` must be writable.
TsvfStatus tsvf_element_of_reality(const struct TsvfTwoState *tsv,
                                   const struct TsvfOperator *observable,
                                   double tolerance,
                                   bool *found,
                                   double *value);

// Mean pointer position and post-selection probability for a Gaussian
// pointer of spread `width` and coupling `coupling`, on an automatically
// sized grid of `n_points`.
//
// # Safety
// Handles must be live; `center` and `post_selection_probability` must be
// writable.
TsvfStatus tsvf_pointer_center(const struct TsvfTwoState *tsv,
                               const struct TsvfOperator *observable,
                               double width,
                               double coupling,
                               size_t n_points,
                               double *center,
                               double *post_selection_probability);

// Parses world-file text.
//
// # Safety
// `source` must be a NUL-terminated string; `result` must be writable.
TsvfStatus tsvf_world_parse(const char *source, struct TsvfWorld **result);

// Outcome distribution of the named observable measured at `time`.
//
// # Safety
// `world` must be live; `observable` NUL-terminated; `values` and
// `probabilities` must hold `capacity` doubles; `len` must be writable.
TsvfStatus tsvf_world_counterfactual(const struct TsvfWorld *world,
                                     int64_t time,
                                     const char *observable,
                                     double *values,
                                     double *probabilities,
                                     size_t capacity,
                                     size_t *len);

// # Safety
// `world` must be null or a handle not yet freed.
void tsvf_world_free(struct TsvfWorld *world);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* TSVF_LAB_H */
