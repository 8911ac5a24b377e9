#ifndef GAUSSINV_H
#define GAUSSINV_H

/* Generated by cbindgen from crates/ffi/src/lib.rs; do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

typedef enum GiStatus {
  GI_STATUS_OK = 0,
  GI_STATUS_NULL_POINTER = 1,
  GI_STATUS_MALFORMED_STATE = 2,
  GI_STATUS_UNPHYSICAL = 3,
  GI_STATUS_DIMENSION_MISMATCH = 4,
  GI_STATUS_INVALID_PARAMETER = 5,
  GI_STATUS_NOT_UNITARY = 6,
  GI_STATUS_NUMERICAL = 7,
  GI_STATUS_PARSE = 8,
  GI_STATUS_INVALID_UTF8 = 9,
  GI_STATUS_BUFFER_SIZE = 10,
  GI_STATUS_PANIC = 11,
} GiStatus;

/**
 * Opaque Gaussian state.
 */
typedef struct GiState GiState;

/**
 * Opaque passive unitary.
 */
typedef struct GiUnitary GiUnitary;

typedef struct GiReport2 {
  double i1;
  double i2;
  double tau1;
  double tau2;
  double lni1;
  double lni2;
  double is1;
  double is2;
  double is3;
  double is4;
  double delta_tilde_s;
  double ei;
  double ppt_witness;
  bool entangled;
  double d_minus;
  double e_n;
  double e_n_unclipped;
  double delta;
  double delta_s;
  double gni;
} GiReport2;

/**
 * Pair-indexed fields use the order (0,1), (0,2), (1,2).
 */
typedef struct GiReport3 {
  double lni[3];
  double ei_pair[3];
  double gni3;
  double delta3;
  double delta_s3;
  double k;
  double is_mode[3];
  double is_pair[3];
} GiReport3;

typedef struct GiTwinBeamBs {
  double lni1;
  double lni2;
  double ei;
  double gni;
  double ncl_window_halfwidth;
} GiTwinBeamBs;

typedef struct GiThreeModeScheme {
  double lni[3];
  double ei_pair[3];
  double gni3;
  double asboth_estimate;
} GiThreeModeScheme;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Message for the last failed call on this thread, or null after a
 * successful one. Valid until the next `gi_*` call on the same thread.
 */
const char *gi_last_error_message(void);

/**
 * Library version, a static NUL-terminated string.
 */
const char *gi_version(void);

/**
 * # Safety
 * `s` must come from a `gi_*` function returning an owned string, or be null.
 */
void gi_string_free(char *s);

/**
 * # Safety
 * `out` must be a valid pointer.
 */
enum GiStatus gi_state_vacuum(size_t modes, struct GiState **out);

/**
 * # Safety
 * `out` must be a valid pointer.
 */
enum GiStatus gi_state_thermal(double b, struct GiState **out);

/**
 * # Safety
 * `out` must be a valid pointer.
 */
enum GiStatus gi_state_squeezed_thermal(double b_th, double r, double phi, struct GiState **out);

/**
 * # Safety
 * `out` must be a valid pointer.
 */
enum GiStatus gi_state_twin_beam(double bp, struct GiState **out);

/**
 * # Safety
 * `out` must be a valid pointer.
 */
enum GiStatus gi_state_noisy_twin_beam(double bp, double bn1, double bn2, struct GiState **out);

/**
 * Tensor product `first ⊗ second`; the inputs stay owned by the caller.
 *
 * # Safety
 * Handles must be live; `out` must be a valid pointer.
 */
enum GiStatus gi_state_product(const struct GiState *first,
                               const struct GiState *second,
                               struct GiState **out);

/**
 * Builds a state from a constructor spec such as `"twin-beam:1+vacuum:1"`.
 *
 * # Safety
 * `spec` must be a NUL-terminated string; `out` must be a valid pointer.
 */
enum GiStatus gi_state_from_spec(const char *spec, struct GiState **out);

/**
 * # Safety
 * `json` must be a NUL-terminated string; `out` must be a valid pointer.
 */
enum GiStatus gi_state_from_json(const char *json, struct GiState **out);

/**
 * Full-form JSON of the state. Release the string with [`gi_string_free`].
 *
 * # Safety
 * `state` must be live; `out` must be a valid pointer.
 */
enum GiStatus gi_state_to_json(const struct GiState *state, char **out);

/**
 * # Safety
 * `state` must come from a `gi_state_*` constructor, or be null.
 */
void gi_state_free(struct GiState *state);

/**
 * Number of modes, or 0 for a null handle.
 *
 * # Safety
 * `state` must be live or null.
 */
size_t gi_state_modes(const struct GiState *state);

/**
 * Reduced state on `keep[0..len]` (distinct zero-based indices, in order).
 *
 * # Safety
 * `keep` must point to `len` values; `out` must be a valid pointer.
 */
enum GiStatus gi_state_reduce(const struct GiState *state,
                              const size_t *keep,
                              size_t len,
                              struct GiState **out);

/**
 * Physicality test; a non-positive `tol` selects the library default.
 *
 * # Safety
 * `state` must be live; out-pointers must be valid.
 */
enum GiStatus gi_state_validate(const struct GiState *state,
                                double tol,
                                bool *physical,
                                double *min_eig);

/**
 * Purity test; a non-positive `tol` selects the library default.
 *
 * # Safety
 * `state` must be live; `pure_out` must be valid.
 */
enum GiStatus gi_state_is_pure(const struct GiState *state, double tol, bool *pure_out);

/**
 * Writes the `modes` symplectic eigenvalues in ascending order.
 *
 * # Safety
 * `buf` must hold `len` doubles.
 */
enum GiStatus gi_state_symplectic_eigenvalues(const struct GiState *state, double *buf, size_t len);

/**
 * Writes the 2n×2n quadrature covariance matrix, row-major, interleaved
 * `(x1, p1, x2, p2, …)` ordering.
 *
 * # Safety
 * `buf` must hold `len` doubles.
 */
enum GiStatus gi_state_quadrature(const struct GiState *state, double *buf, size_t len);

/**
 * # Safety
 * `out` must be a valid pointer.
 */
enum GiStatus gi_unitary_identity(size_t modes, struct GiUnitary **out);

/**
 * Beam splitter of transmissivity `t` on modes `i`, `j`.
 *
 * # Safety
 * `out` must be a valid pointer.
 */
enum GiStatus gi_unitary_beam_splitter(size_t modes,
                                       size_t i,
                                       size_t j,
                                       double t,
                                       double phase,
                                       struct GiUnitary **out);

/**
 * # Safety
 * `out` must be a valid pointer.
 */
enum GiStatus gi_unitary_phase_shifter(size_t modes,
                                       size_t j,
                                       double theta,
                                       struct GiUnitary **out);

/**
 * Haar-random unitary, deterministic in `seed`.
 *
 * # Safety
 * `out` must be a valid pointer.
 */
enum GiStatus gi_unitary_haar(size_t modes, uint64_t seed, struct GiUnitary **out);

/**
 * `second ∘ first`: the result applies `first`, then `second`.
 *
 * # Safety
 * Handles must be live; `out` must be a valid pointer.
 */
enum GiStatus gi_unitary_compose(const struct GiUnitary *second,
                                 const struct GiUnitary *first,
                                 struct GiUnitary **out);

/**
 * New state `U · state`; the input handle is not consumed.
 *
 * # Safety
 * Handles must be live; `out` must be a valid pointer.
 */
enum GiStatus gi_unitary_apply(const struct GiUnitary *unitary,
                               const struct GiState *state,
                               struct GiState **out);

/**
 * # Safety
 * `unitary` must come from a `gi_unitary_*` constructor, or be null.
 */
void gi_unitary_free(struct GiUnitary *unitary);

/**
 * Two-mode report. Fails with `Unphysical` or `DimensionMismatch`.
 *
 * # Safety
 * `state` must be live; `out` must be valid.
 */
enum GiStatus gi_invariants2(const struct GiState *state, struct GiReport2 *out);

/**
 * Three-mode report. Fails with `Unphysical` or `DimensionMismatch`.
 *
 * # Safety
 * `state` must be live; `out` must be valid.
 */
enum GiStatus gi_invariants3(const struct GiState *state, struct GiReport3 *out);

/**
 * Twin beam through a beam splitter; `simulate` selects the state pipeline
 * over the closed form.
 *
 * # Safety
 * `out` must be valid.
 */
enum GiStatus gi_twin_beam_at_bs(double bp, double t, bool simulate, struct GiTwinBeamBs *out);

/**
 * Twin beam plus vacuum through the two-beam-splitter scheme.
 *
 * # Safety
 * `out` must be valid.
 */
enum GiStatus gi_three_mode_scheme(double bp,
                                   double t,
                                   bool simulate,
                                   struct GiThreeModeScheme *out);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* GAUSSINV_H */
