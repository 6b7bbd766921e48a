#ifndef CAS_H
#define CAS_H

/* Generated by cbindgen from crates/ffi; do not edit. */

#include <stdint.h>
#include <stddef.h>

typedef enum CasStatus {
  CAS_STATUS_OK = 0,
  CAS_STATUS_NULL_POINTER = 1,
  CAS_STATUS_INVALID_ARGUMENT = 2,
  CAS_STATUS_SINGULAR_POINT = 3,
  CAS_STATUS_OUT_OF_DOMAIN = 4,
  CAS_STATUS_UNSUPPORTED = 5,
  CAS_STATUS_DEGENERATE = 6,
  CAS_STATUS_PANIC = 7,
} CasStatus;

/**
 * Opaque chart handle.
 */
typedef struct CasChart CasChart;

/**
 * Curvatures and angle at a point. `k_extrinsic` and `h` are NaN outside
 * E3.
 */
typedef struct CasCurvature {
  double k_intrinsic;
  double k_extrinsic;
  double h;
  double angle;
} CasCurvature;

/**
 * Sampling grid; see `cas_grid_default`.
 */
typedef struct CasGrid {
  double u_min;
  double u_max;
  double v_min;
  double v_max;
  uint32_t nu;
  uint32_t nv;
  double exclusion;
} CasGrid;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Message for the last failed call on this thread; empty after a success.
 * The pointer stays valid until the next call on the same thread.
 */
const char *cas_last_error(void);

/**
 * The ruled chart for angle `theta` and profile `alpha`
 * (`const:<c>`, `linear`, `cos`, `sin2` or `csv:<path>`).
 *
 * # Safety
 * `alpha` must be a NUL-terminated string and `out` a valid pointer.
 */
enum CasStatus cas_e3_case1_chart(double theta, const char *alpha, struct CasChart **out);

/**
 * # Safety
 * `out` must be a valid pointer.
 */
enum CasStatus cas_e3_plane_chart(double theta, struct CasChart **out);

/**
 * Vertical cylinder over the circle of the given radius.
 *
 * # Safety
 * `out` must be a valid pointer.
 */
enum CasStatus cas_e3_cylinder_chart(double radius, struct CasChart **out);

/**
 * S²×R chart over the equator.
 *
 * # Safety
 * `out` must be a valid pointer.
 */
enum CasStatus cas_s2r_chart(double theta, struct CasChart **out);

/**
 * H²×R chart over the geodesic `(sinh v, 0, cosh v)`.
 *
 * # Safety
 * `out` must be a valid pointer.
 */
enum CasStatus cas_h2r_chart(double theta, struct CasChart **out);

/**
 * Worked example `n` in 1..=4.
 *
 * # Safety
 * `out` must be a valid pointer.
 */
enum CasStatus cas_worked_example(uint32_t n, struct CasChart **out);

/**
 * A copy of an E3 chart with `eps·u²` added to the height.
 *
 * # Safety
 * `chart` must be a live handle and `out` a valid pointer.
 */
enum CasStatus cas_chart_perturbed(const struct CasChart *chart, double eps, struct CasChart **out);

/**
 * # Safety
 * `chart` must be null or a handle not yet freed.
 */
void cas_chart_free(struct CasChart *chart);

/**
 * Ambient dimension of the chart: 3 or 4.
 *
 * # Safety
 * `chart` must be null or a live handle.
 */
uint32_t cas_chart_dim(const struct CasChart *chart);

/**
 * Position at `(u, v)` as `(x1, x2, x3, t)`; `t` is 0 in E3.
 *
 * # Safety
 * `chart` must be a live handle and `out` must point to 4 doubles.
 */
enum CasStatus cas_chart_eval(const struct CasChart *chart, double u, double v, double *out);

/**
 * Analytic two-jet as 24 doubles: `r, r_u, r_v, r_uu, r_uv, r_vv`, each
 * `(x1, x2, x3, t)`.
 *
 * # Safety
 * `chart` must be a live handle and `out` must point to 24 doubles.
 */
enum CasStatus cas_chart_jet(const struct CasChart *chart, double u, double v, double *out);

/**
 * # Safety
 * `chart` must be a live handle and `out` a valid pointer.
 */
enum CasStatus cas_chart_curvature(const struct CasChart *chart,
                                   double u,
                                   double v,
                                   struct CasCurvature *out);

/**
 * The default 64×128 grid on `[0, 2] × [0, 2π]`.
 */
struct CasGrid cas_grid_default(void);

/**
 * Runs the verification suite with default tolerances and returns the
 * JSON report in `*out_json` (free with `cas_string_free`). A null `grid`
 * selects the default grid. Returns `CAS_STATUS_OK` even when checks fail;
 * read the report's `pass` field.
 *
 * # Safety
 * `chart` must be a live handle, `grid` null or valid, `out_json` valid.
 */
enum CasStatus cas_chart_verify_json(const struct CasChart *chart,
                                     const struct CasGrid *grid,
                                     char **out_json);

/**
 * # Safety
 * `s` must be null or a string returned by this library and not yet freed.
 */
void cas_string_free(char *s);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* CAS_H */
