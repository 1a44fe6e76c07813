#ifndef VANDERMONDE_H
#define VANDERMONDE_H

/* Generated by cbindgen from crates/ffi/src/lib.rs. Do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

typedef enum VdmStatus {
  VDM_STATUS_OK = 0,
  VDM_STATUS_NULL_POINTER = 1,
  VDM_STATUS_INVALID_ARGUMENT = 2,
  VDM_STATUS_NUMERICAL_FAILURE = 3,
  VDM_STATUS_BUFFER_TOO_SMALL = 4,
  VDM_STATUS_IO_ERROR = 5,
  VDM_STATUS_PANIC = 6,
} VdmStatus;

/**
 * Certified extreme points for one dimension.
 */
typedef struct VdmExtrema VdmExtrema;

/**
 * A `(theta, phi)` lattice of determinant values.
 */
typedef struct VdmGrid VdmGrid;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Message describing the last failure on this thread; empty after success.
 * The pointer stays valid until the next call into this library on the same thread.
 */
const char *vdm_last_error_message(void);

/**
 * `v_n(x) = prod_{i<j} (x_j - x_i)`.
 *
 * # Safety
 * `x` must point to `n` doubles and `out` to one writable double.
 */
enum VdmStatus vdm_det(const double *x, size_t n, double *out);

/**
 * Gradient of `v_n` at `x`, written to `grad[0..n]`.
 *
 * # Safety
 * `x` and `grad` must each point to `n` doubles.
 */
enum VdmStatus vdm_grad(const double *x, size_t n, double *grad);

/**
 * Ascending coefficients of the monic extreme-point polynomial `P_n`;
 * needs `len >= n + 1`.
 *
 * # Safety
 * `out` must point to `len` writable doubles.
 */
enum VdmStatus vdm_pn_coefficients(size_t n, double *out, size_t len);

/**
 * `sum_{i<j} (x_j - x_i)^-2 - (n(n-1)/2)^2 / 2`, zero at the extreme points.
 *
 * # Safety
 * `x` must point to `n` doubles and `out` to one writable double.
 */
enum VdmStatus vdm_equi_residual(const double *x, size_t n, double *out);

/**
 * Solves and certifies the extreme points of `v_n`, `2 <= n <= 50`.
 *
 * # Safety
 * `out` must point to a writable handle slot.
 */
enum VdmStatus vdm_extrema_new(size_t n, struct VdmExtrema **out);

/**
 * Number of roots, which is `n`.
 *
 * # Safety
 * `h` must be a live handle; `out` a writable size.
 */
enum VdmStatus vdm_extrema_len(const struct VdmExtrema *h, size_t *out);

/**
 * Ascending roots into `out[0..n]`.
 *
 * # Safety
 * `h` must be a live handle; `out` must point to `len` writable doubles.
 */
enum VdmStatus vdm_extrema_roots(const struct VdmExtrema *h, double *out, size_t len);

/**
 * `|v_n|` at the extreme points and its base-10 logarithm.
 *
 * # Safety
 * `h` must be a live handle; `value` and `log10_value` writable doubles.
 */
enum VdmStatus vdm_extrema_value(const struct VdmExtrema *h, double *value, double *log10_value);

/**
 * # Safety
 * `h` must come from [`vdm_extrema_new`] and not be used afterwards. Null is ignored.
 */
void vdm_extrema_free(struct VdmExtrema *h);

/**
 * Maximizes `|v_n|` on the unit sphere from `restarts` seeded starts.
 *
 * # Safety
 * `point` must point to `n` writable doubles and `value` to one.
 */
enum VdmStatus vdm_maximize(size_t n, uint64_t seed, size_t restarts, double *point, double *value);

/**
 * Evaluates `v_n` (`3 <= n <= 7`) on a `theta_count x phi_count` lattice.
 * `exponents` may be null; otherwise it holds three integer exponents and
 * `n` must be 3.
 *
 * # Safety
 * `exponents` must be null or point to `exponents_len` values; `out` must
 * point to a writable handle slot.
 */
enum VdmStatus vdm_grid_new(size_t n,
                            size_t theta_count,
                            size_t phi_count,
                            const uint32_t *exponents,
                            size_t exponents_len,
                            struct VdmGrid **out);

/**
 * # Safety
 * `h` must be a live handle; `theta_count` and `phi_count` writable sizes.
 */
enum VdmStatus vdm_grid_dims(const struct VdmGrid *h, size_t *theta_count, size_t *phi_count);

/**
 * Values in row-major order (`phi` rows, `theta` columns).
 *
 * # Safety
 * `h` must be a live handle; `out` must point to `len` writable doubles.
 */
enum VdmStatus vdm_grid_values(const struct VdmGrid *h, double *out, size_t len);

/**
 * Writes the grid as CSV with header `theta,phi,value`.
 *
 * # Safety
 * `h` must be a live handle; `path` a nul-terminated UTF-8 string.
 */
enum VdmStatus vdm_grid_write_csv(const struct VdmGrid *h, const char *path);

/**
 * # Safety
 * `h` must come from [`vdm_grid_new`] and not be used afterwards. Null is ignored.
 */
void vdm_grid_free(struct VdmGrid *h);

/**
 * `g_n(x, a t) / v_n(a t)` for real positive nodes, with its `t -> 0` limit
 * `prod 1/(k-1)! * v_n(log x)`. Real parts are returned.
 *
 * # Safety
 * `x` and `a` must each point to `n` doubles; `ratio` and `limit` to one writable double each.
 */
enum VdmStatus vdm_ratio_limit(const double *x,
                               const double *a,
                               size_t n,
                               double t,
                               double *ratio,
                               double *limit);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* VANDERMONDE_H */
