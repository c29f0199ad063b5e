/* Generated by cbindgen from crates/ffi/src/lib.rs. Do not edit. */

#ifndef HOMOGENEOUS_FINSLER_H
#define HOMOGENEOUS_FINSLER_H

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

// Source of fundamental-tensor values for geodesic decisions.
typedef enum HfSource {
  // The space's default: closed form for exponential metrics, oracle otherwise.
  HF_SOURCE_DEFAULT = 0,
  HF_SOURCE_CLOSED_FORM = 1,
  HF_SOURCE_ORACLE = 2,
  HF_SOURCE_RIEMANNIAN = 3,
} HfSource;

typedef enum HfStatus {
  HF_STATUS_OK = 0,
  HF_STATUS_NULL_POINTER = 1,
  HF_STATUS_INVALID_INPUT = 2,
  HF_STATUS_DIMENSION_MISMATCH = 3,
  HF_STATUS_DOMAIN = 4,
  HF_STATUS_SINGULARITY = 5,
  HF_STATUS_UNSUPPORTED = 6,
  HF_STATUS_IO = 7,
  HF_STATUS_PARSE = 8,
  HF_STATUS_PANIC = 9,
} HfStatus;

// A validated homogeneous space with its resolved options.
typedef struct HfSpace HfSpace;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

// Parses and validates a JSON document. Environment overrides apply.
//
// # Safety
// `json` must be a NUL-terminated string and `out` a valid pointer.
enum HfStatus hf_space_from_json(const char *json, struct HfSpace **out);

// Reads, parses and validates a JSON document file.
//
// # Safety
// `path` must be a NUL-terminated string and `out` a valid pointer.
enum HfStatus hf_space_from_file(const char *path, struct HfSpace **out);

// Releases a handle. Null is ignored.
//
// # Safety
// `space` must come from `hf_space_from_*` and not be used afterwards.
void hf_space_free(struct HfSpace *space);

// Dimension of `𝔤`, or 0 for a null handle.
//
// # Safety
// `space` must be null or a live handle.
size_t hf_space_dim(const struct HfSpace *space);

// Dimension of `𝔪`, or 0 for a null handle.
//
// # Safety
// `space` must be null or a live handle.
size_t hf_space_m_dim(const struct HfSpace *space);

// `F(y)` for `y ∈ 𝔪`.
//
// # Safety
// `y` must point to `len` doubles and `out` to one.
enum HfStatus hf_finsler_norm(const struct HfSpace *space,
                              const double *y,
                              size_t len,
                              double *out);

// `g_y(u, v)` from the oracle. `step <= 0` selects hyper-dual numbers,
// otherwise the central-difference stencil with that step.
//
// # Safety
// `y`, `u`, `v` must each point to `len` doubles and `out` to one.
enum HfStatus hf_g_oracle(const struct HfSpace *space,
                          const double *y,
                          const double *u,
                          const double *v,
                          size_t len,
                          double step,
                          double *out);

// `g_y(u, v)` from the metric's printed closed form.
//
// # Safety
// `y`, `u`, `v` must each point to `len` doubles and `out` to one.
enum HfStatus hf_g_closed(const struct HfSpace *space,
                          const double *y,
                          const double *u,
                          const double *v,
                          size_t len,
                          double *out);

// Writes `g_{y_𝔪}(y_𝔪, [y, e_i]_𝔪)` for every basis index into `values`
// (length `len`) and the max-abs norm into `norm`.
//
// # Safety
// `y` and `values` must each point to `len` doubles and `norm` to one.
enum HfStatus hf_criterion_residual(const struct HfSpace *space,
                                    const double *y,
                                    size_t len,
                                    enum HfSource source,
                                    double *values,
                                    double *norm);

// Geodesic-vector decision for `y ∈ 𝔤`. `tol <= 0` selects the
// document's criterion tolerance or the source default.
//
// # Safety
// `y` must point to `len` doubles and `out` to one bool.
enum HfStatus hf_is_geodesic_vector(const struct HfSpace *space,
                                    const double *y,
                                    size_t len,
                                    double tol,
                                    enum HfSource source,
                                    bool *out);

// Shen's condition on `n_grid` points at `b`.
//
// # Safety
// `min_e` must point to one double and `pass` to one bool.
enum HfStatus hf_shen_check(const struct HfSpace *space,
                            double b,
                            size_t n_grid,
                            double *min_e,
                            bool *pass);

// Message of the last failed call on this thread, empty after a success.
// Valid until the next call on the same thread.
const char *hf_last_error_message(void);

// Library version, NUL-terminated and static.
const char *hf_version(void);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* HOMOGENEOUS_FINSLER_H */
