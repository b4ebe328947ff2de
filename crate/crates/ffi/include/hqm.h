#ifndef HQM_H
#define HQM_H

/* Generated by cbindgen from crates/ffi/src/lib.rs. Do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stdint.h>
#include <stdlib.h>

typedef enum HqmStatus {
  HQM_STATUS_OK = 0,
  HQM_STATUS_NULL_POINTER = 1,
  HQM_STATUS_INVALID_ARGUMENT = 2,
  HQM_STATUS_PRECONDITION = 3,
  HQM_STATUS_FIT_FAILURE = 4,
  HQM_STATUS_UNDERDETERMINED = 5,
  HQM_STATUS_DEGREE_BOUND_TOO_SMALL = 6,
  HQM_STATUS_ORACLE_TOO_LARGE = 7,
  HQM_STATUS_INSUFFICIENT_TRUNCATION = 8,
  HQM_STATUS_PARSE = 9,
  HQM_STATUS_PANIC = 10,
} HqmStatus;

// A fit of a connected counting function in `Q[E2, E4, E6]`.
typedef struct HqmFit HqmFit;

// `φ_m` as a polynomial in `Y_1..Y_m`.
typedef struct HqmPhi HqmPhi;

// A counting series in q.
typedef struct HqmSeries HqmSeries;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

// Message for the last failed call on this thread, or null. Valid until the next call.
const char *hqm_last_error(void);

// Library version as a static string.
const char *hqm_version(void);

// # Safety
// `s` must be null or a string returned by this library, not yet freed.
void hqm_string_free(char *s);

// Build `φ_m`.
//
// # Safety
// `out` must be valid for writes.
enum HqmStatus hqm_phi_new(uint32_t m, struct HqmPhi **out);

// # Safety
// `phi` must be null or a handle from [`hqm_phi_new`], not yet freed.
void hqm_phi_free(struct HqmPhi *phi);

// Number of variables `m` and of nonzero monomials.
//
// # Safety
// `phi` must be a live handle; the out pointers must be valid for writes.
enum HqmStatus hqm_phi_shape(const struct HqmPhi *phi, uintptr_t *out_nvars, uintptr_t *out_terms);

// Coefficient of `Y_1^{e_1}..Y_m^{e_m}`; `exps` holds `nvars` exponents.
//
// # Safety
// `phi` must be a live handle, `exps` must point to `len` values, `out` valid for writes.
enum HqmStatus hqm_phi_coeff(const struct HqmPhi *phi,
                             const uint32_t *exps,
                             uintptr_t len,
                             char **out);

// Value of `φ_m` at `Y_1..Y_m` given as rational strings.
//
// # Safety
// `phi` must be a live handle, `ys` must point to `len` NUL-terminated strings, `out`
// valid for writes.
enum HqmStatus hqm_phi_eval(const struct HqmPhi *phi,
                            const char *const *ys,
                            uintptr_t len,
                            char **out);

// JSON document `{m, monomials}`.
//
// # Safety
// `phi` must be a live handle; `out` valid for writes.
enum HqmStatus hqm_phi_to_json(const struct HqmPhi *phi, char **out);

// Shifted symmetric character ratio for `m`-cycles, `|C_m|·χ^λ(m-cycle)/dim λ`.
//
// # Safety
// `parts` must point to `len` weakly decreasing values; `out` valid for writes.
enum HqmStatus hqm_character(const uint32_t *parts, uintptr_t len, uint32_t m, char **out);

// Generating series of covers of genus `g` through `q^dmax`: connected (`F_g`) or the
// disconnected block.
//
// # Safety
// `out` must be valid for writes.
enum HqmStatus hqm_series_counts(uint32_t m,
                                 int64_t g,
                                 uint32_t dmax,
                                 bool connected,
                                 struct HqmSeries **out);

// # Safety
// `s` must be null or a handle from [`hqm_series_counts`], not yet freed.
void hqm_series_free(struct HqmSeries *s);

// Coefficient of `q^d`. Fails with `HQM_STATUS_PRECONDITION` beyond the known range.
//
// # Safety
// `s` must be a live handle; `out` valid for writes.
enum HqmStatus hqm_series_coeff(const struct HqmSeries *s, int64_t d, char **out);

// JSON document `{m, g, b, kind, series}`.
//
// # Safety
// `s` must be a live handle; `out` valid for writes.
enum HqmStatus hqm_series_to_json(const struct HqmSeries *s, char **out);

// Fit `F_g^(m)` in `Q[E2, E4, E6]` from the coefficients through `q^dmax`.
// `wmax = 0` selects the default weight search.
//
// # Safety
// `out` must be valid for writes.
enum HqmStatus hqm_fit_connected(uint32_t m,
                                 int64_t g,
                                 uint32_t dmax,
                                 uint32_t wmax,
                                 uintptr_t margin,
                                 struct HqmFit **out);

// # Safety
// `fit` must be null or a handle from [`hqm_fit_connected`], not yet freed.
void hqm_fit_free(struct HqmFit *fit);

// Weight of the fitted polynomial when it is homogeneous.
//
// # Safety
// `fit` must be a live handle; the out pointers must be valid for writes.
enum HqmStatus hqm_fit_weight(const struct HqmFit *fit,
                              bool *out_homogeneous,
                              uint32_t *out_weight);

// JSON fit report.
//
// # Safety
// `fit` must be a live handle; `out` valid for writes.
enum HqmStatus hqm_fit_to_json(const struct HqmFit *fit, char **out);

// Run the acceptance suite. `out_ok` is true when nothing failed beyond the recorded
// deviation; `out_json` receives the per-check results.
//
// # Safety
// Both out pointers must be valid for writes.
enum HqmStatus hqm_selftest(uint32_t fit_dmax, bool *out_ok, char **out_json);

#ifdef __cplusplus
} // extern "C"
#endif // __cplusplus

#endif /* HQM_H */
