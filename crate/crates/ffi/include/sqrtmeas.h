#ifndef SQRTMEAS_H
#define SQRTMEAS_H

/* Generated by cbindgen from crates/ffi/src/lib.rs. Do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

// Result code of every fallible call.
typedef enum {
  SM_STATUS_OK = 0,
  SM_STATUS_NULL_POINTER = 1,
  SM_STATUS_INVALID_INPUT = 2,
  SM_STATUS_PRECONDITION = 3,
  SM_STATUS_NOT_GEOMETRICALLY_UNIFORM = 4,
  SM_STATUS_UTF8 = 5,
  SM_STATUS_PANIC = 6,
} SmStatus;

// Opaque measurement.
typedef struct SmMeasurement SmMeasurement;

// Opaque state set.
typedef struct SmStateSet SmStateSet;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

// Parses a state-set JSON document.
//
// # Safety
// `json` must be a nul-terminated string; `out` must be writable.
SmStatus sm_state_set_from_json(const char *json, SmStateSet **out);

// Builds a normalized state set from `dim x count` column-major arrays.
// `priors` may be null for uniform priors.
//
// # Safety
// `re` and `im` must hold `dim * count` values; `priors`, when not null,
// `count` values; `out` must be writable.
SmStatus sm_state_set_from_columns(size_t dim,
                                   size_t count,
                                   const double *re,
                                   const double *im,
                                   const double *priors,
                                   SmStateSet **out);

// # Safety
// `s` must come from this library and not be freed twice. Null is ignored.
void sm_state_set_free(SmStateSet *s);

// # Safety
// `s` must be a valid handle; `dim` and `count` must be writable.
SmStatus sm_state_set_shape(const SmStateSet *s, size_t *dim, size_t *count);

// Least-squares measurement, rank tolerance `rank_tol` (0 for the default).
//
// # Safety
// `s` must be a valid handle; `out` must be writable.
SmStatus sm_lsm(const SmStateSet *s, double rank_tol, SmMeasurement **out);

// Square-root measurement; the same matrix as [`sm_lsm`].
//
// # Safety
// As for [`sm_lsm`].
SmStatus sm_srm(const SmStateSet *s, double rank_tol, SmMeasurement **out);

// Orthogonal least-squares measurement (requires `count <= dim`).
//
// # Safety
// As for [`sm_lsm`].
SmStatus sm_orthogonal_lsm(const SmStateSet *s, double rank_tol, SmMeasurement **out);

// Weighted least-squares measurement with `count` positive weights.
//
// # Safety
// `weights` must hold `len` values; otherwise as for [`sm_lsm`].
SmStatus sm_wlsm(const SmStateSet *s,
                 const double *weights,
                 size_t len,
                 double rank_tol,
                 SmMeasurement **out);

// Square-root measurement of a geometrically uniform set; `group_json` is a
// group-spec document.
//
// # Safety
// `group_json` must be a nul-terminated string; otherwise as for [`sm_lsm`].
SmStatus sm_gu_srm(const SmStateSet *s, const char *group_json, SmMeasurement **out);

// # Safety
// `m` must come from this library and not be freed twice. Null is ignored.
void sm_measurement_free(SmMeasurement *m);

// # Safety
// `m` must be a valid handle; `dim` and `count` must be writable.
SmStatus sm_measurement_shape(const SmMeasurement *m, size_t *dim, size_t *count);

// Copies the measurement matrix, column-major, into `re` and `im`, each of
// length `len == dim * count`.
//
// # Safety
// `re` and `im` must be writable for `len` values.
SmStatus sm_measurement_copy(const SmMeasurement *m, double *re, double *im, size_t len);

// Measurement document as JSON; free with [`sm_string_free`].
//
// # Safety
// `m` must be a valid handle; `out` must be writable.
SmStatus sm_measurement_to_json(const SmMeasurement *m, char **out);

// Squared error `sum_i || phi_i - mu_i ||^2`.
//
// # Safety
// Handles must be valid; `out` must be writable.
SmStatus sm_residual_error(const SmStateSet *s, const SmMeasurement *m, double *out);

// Probability of a detection error under the set's priors.
//
// # Safety
// Handles must be valid; `out` must be writable.
SmStatus sm_error_probability(const SmStateSet *s, const SmMeasurement *m, double *out);

// Minimum-error optimality report as a JSON object; free with
// [`sm_string_free`].
//
// # Safety
// Handles must be valid; `out` must be writable.
SmStatus sm_holevo_report_json(const SmStateSet *s, const SmMeasurement *m, double tol, char **out);

// # Safety
// `s` must come from this library. Null is ignored.
void sm_string_free(char *s);

// Message of the last failed call on this thread, or null. The pointer is
// valid until the next call into the library on the same thread.
const char *sm_last_error_message(void);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* SQRTMEAS_H */
