#ifndef LAGSURF_H
#define LAGSURF_H

/* Generated by cbindgen from crates/ffi/src/lib.rs. Do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

/**
 * Result codes. Zero is success.
 */
typedef enum LagsurfStatus {
  LAGSURF_STATUS_OK = 0,
  LAGSURF_STATUS_NULL_POINTER = 1,
  LAGSURF_STATUS_INVALID_UTF8 = 2,
  /**
   * Unknown identifier or malformed argument.
   */
  LAGSURF_STATUS_INPUT = 3,
  LAGSURF_STATUS_DOMAIN = 4,
  LAGSURF_STATUS_PRECONDITION = 5,
  LAGSURF_STATUS_DEGENERATE = 6,
  LAGSURF_STATUS_CONVERGENCE = 7,
  /**
   * An eigenvalue fell inside the safety band below 1.
   */
  LAGSURF_STATUS_AMBIGUITY = 8,
  LAGSURF_STATUS_DIVERGENCE = 9,
  /**
   * The call completed but at least one check failed.
   */
  LAGSURF_STATUS_CHECK_FAILED = 10,
  LAGSURF_STATUS_PANIC = 99,
} LagsurfStatus;

/**
 * Opaque catalog surface.
 */
typedef struct LagsurfSurface LagsurfSurface;

/**
 * Pointwise invariants at one parameter point.
 */
typedef struct LagsurfPointInvariants {
  /**
   * Ambient position `(x1, x2, x3, y1, y2, y3)`.
   */
  double position[6];
  double g11;
  double g12;
  double g22;
  double gauss_curvature;
  double mean_curvature_norm;
  double sigma_squared;
  double lagrangian_residual;
  /**
   * Associated Jacobian; meaningful only when `has_c` is nonzero.
   */
  double c;
  int32_t has_c;
} LagsurfPointInvariants;

typedef struct LagsurfIndex {
  uint32_t ind0;
  uint32_t ind1;
  uint32_t betti1;
  uint32_t index;
  /**
   * Smallest nonzero eigenvalue found.
   */
  double lambda1;
} LagsurfIndex;

typedef struct LagsurfJacobi {
  double sn;
  double cn;
  double dn;
} LagsurfJacobi;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Library version, a static NUL-terminated string.
 */
const char *lagsurf_version(void);

/**
 * Message of the last failed call on this thread, or NULL. Valid until the
 * next library call on the same thread.
 */
const char *lagsurf_last_error(void);

/**
 * Releases a string returned by this library. NULL is ignored.
 */
void lagsurf_string_free(char *s);

/**
 * Resolves a catalog identifier (for example `"klein-b"` or
 * `"torus-ab:0.3:0.4"`) into a new handle.
 */
enum LagsurfStatus lagsurf_surface_new(const char *name, struct LagsurfSurface **out);

/**
 * Releases a handle. NULL is ignored.
 */
void lagsurf_surface_free(struct LagsurfSurface *s);

/**
 * Copies the surface's catalog name into a new string.
 */
enum LagsurfStatus lagsurf_surface_name(const struct LagsurfSurface *s, char **out);

/**
 * Parameter rectangle `[t0, t1] × [s0, s1]` as `{t0, t1, s0, s1}`.
 */
enum LagsurfStatus lagsurf_surface_domain(const struct LagsurfSurface *s, double (*out)[4]);

/**
 * Ambient position `(x, y) ∈ S²×S²` at `(t, s)`.
 */
enum LagsurfStatus lagsurf_surface_eval(const struct LagsurfSurface *s,
                                        double t,
                                        double u,
                                        double (*out)[6]);

/**
 * Metric, curvatures and associated Jacobian at `(t, s)` from closed-form jets.
 */
enum LagsurfStatus lagsurf_surface_invariants(const struct LagsurfSurface *s,
                                              double t,
                                              double u,
                                              struct LagsurfPointInvariants *out);

/**
 * Runs the surface analyzers on an `nt × ns` grid and returns the JSON
 * report. Returns [`LagsurfStatus::CheckFailed`] (with the report still
 * written) when a check fails.
 */
enum LagsurfStatus lagsurf_surface_analyze_json(const struct LagsurfSurface *s,
                                                size_t nt,
                                                size_t ns,
                                                char **out);

/**
 * Index of a compact minimal Lagrangian torus or Klein bottle on an
 * `n × n` grid with margin `epsilon` below the eigenvalue 1.
 */
enum LagsurfStatus lagsurf_surface_index(const struct LagsurfSurface *s,
                                         size_t n,
                                         double epsilon,
                                         struct LagsurfIndex *out);

/**
 * Runs one verification suite (`"lagrangian"`, `"minimal"`, `"identities"`,
 * `"gaussmap"`, `"sinh-gordon"` or `"spectral"`) with tolerances multiplied
 * by `tol_scale`, and reports the number of passed and failed checks.
 */
enum LagsurfStatus lagsurf_verify_suite(const char *suite,
                                        double tol_scale,
                                        size_t *passed,
                                        size_t *failed);

/**
 * Jacobi `sn, cn, dn` of `x` for modulus `p ∈ [0, 1)`.
 */
enum LagsurfStatus lagsurf_jacobi(double x, double p, struct LagsurfJacobi *out);

/**
 * Complete elliptic integrals `K(p)` and `E(p)`.
 */
enum LagsurfStatus lagsurf_complete_elliptic(double p, double *k, double *e);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* LAGSURF_H */
