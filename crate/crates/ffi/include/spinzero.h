#ifndef SPINZERO_H
#define SPINZERO_H

/* Generated by cbindgen from crates/ffi; do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

/**
 * Result codes. Zero is success; each core error kind has its own code.
 */
typedef enum SzStatus {
  SZ_STATUS_OK = 0,
  SZ_STATUS_NULL_ARGUMENT = 1,
  SZ_STATUS_DOMAIN = 2,
  SZ_STATUS_UNSUPPORTED_BASIS = 3,
  SZ_STATUS_DEGENERATE_FRAME = 4,
  SZ_STATUS_BASIS_MISMATCH = 5,
  SZ_STATUS_DEGENERATE_INPUT = 6,
  SZ_STATUS_CONSTRAINT_RANK = 7,
  SZ_STATUS_PARSE = 8,
  SZ_STATUS_INVALID_UTF8 = 9,
  SZ_STATUS_PANIC = 10,
} SzStatus;

typedef enum SzClassification {
  SZ_CLASSIFICATION_SYMMETRIC = 0,
  SZ_CLASSIFICATION_INADMISSIBLE = 1,
  SZ_CLASSIFICATION_MIXED = 2,
} SzClassification;

/**
 * Opaque harmonic coefficient table.
 */
typedef struct SzCoefficients SzCoefficients;

/**
 * Opaque constrained spectrum.
 */
typedef struct SzSpectrum SzSpectrum;

/**
 * Opaque angular state in a tagged basis.
 */
typedef struct SzState SzState;

typedef struct SzComplex {
  double re;
  double im;
} SzComplex;

/**
 * Seam mismatch at one offset from the equator.
 */
typedef struct SzSeamReport {
  double epsilon;
  double mismatch_sup;
  double mismatch_l2;
  double derivative_defect;
  enum SzClassification classification;
} SzSeamReport;

/**
 * Chart coordinates of an unordered pair.
 */
typedef struct SzCanonicalPoint {
  double center[3];
  double r;
  double theta;
  double phi;
  bool coincident;
} SzCanonicalPoint;

/**
 * Best global phase under the pi rotation about the first body axis.
 */
typedef struct SzPhaseFit {
  struct SzComplex phase;
  double residual;
  /**
   * True when the state picks up a single global phase.
   */
  bool global_phase;
} SzPhaseFit;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Message of the most recent failure on this thread, or NULL if none.
 *
 * The pointer stays valid until the next failing call on the same thread.
 */
const char *sz_last_error_message(void);

/**
 * Releases a string returned by this library. NULL is ignored.
 *
 * # Safety
 * `s` must come from one of the `_to_json` functions and not be freed twice.
 */
void sz_string_free(char *s);

/**
 * Orthonormal spherical harmonic `Y_lm(theta, phi)` with the Condon–Shortley phase.
 *
 * # Safety
 * `out` must be writable.
 */
enum SzStatus sz_sph_harm(uint32_t l, int32_t m, double theta, double phi, struct SzComplex *out);

/**
 * Associated Legendre function `P_l^m(x)`, unnormalized, Condon–Shortley phase.
 *
 * # Safety
 * `out` must be writable.
 */
enum SzStatus sz_assoc_legendre(uint32_t l, int32_t m, double x, double *out);

/**
 * Wigner small-d element `d^l_{mu nu}(beta)`.
 *
 * # Safety
 * `out` must be writable.
 */
enum SzStatus sz_wigner_small_d(uint32_t l, int32_t mu, int32_t nu, double beta, double *out);

/**
 * Parses a coefficient table from its JSON form.
 *
 * # Safety
 * `json` must be a NUL-terminated string; `out` must be writable.
 */
enum SzStatus sz_coefficients_from_json(const char *json, struct SzCoefficients **out);

/**
 * Table holding the single coefficient `a_lm = 1`.
 *
 * # Safety
 * `out` must be writable.
 */
enum SzStatus sz_coefficients_single(uint32_t l, int32_t m, struct SzCoefficients **out);

/**
 * Serializes a coefficient table; free the result with [`sz_string_free`].
 *
 * # Safety
 * `coeffs` must be a live handle; `out` must be writable.
 */
enum SzStatus sz_coefficients_to_json(const struct SzCoefficients *coeffs, char **out);

/**
 * # Safety
 * `coeffs` must be NULL or a handle not yet freed.
 */
void sz_coefficients_free(struct SzCoefficients *coeffs);

/**
 * Evaluates `sum a_lm Y_lm(theta, phi)`.
 *
 * # Safety
 * `coeffs` must be a live handle; `out` must be writable.
 */
enum SzStatus sz_coefficients_evaluate(const struct SzCoefficients *coeffs,
                                       double theta,
                                       double phi,
                                       struct SzComplex *out);

/**
 * Exchange-statistics class of an expansion.
 *
 * # Safety
 * `coeffs` must be a live handle; `out` must be writable.
 */
enum SzStatus sz_statistics_classify(const struct SzCoefficients *coeffs,
                                     double tol,
                                     enum SzClassification *out);

/**
 * Mismatch between the two sides of the equatorial seam at offset `epsilon`.
 *
 * # Safety
 * `coeffs` must be a live handle; `out` must be writable.
 */
enum SzStatus sz_seam_mismatch(const struct SzCoefficients *coeffs,
                               double epsilon,
                               size_t n_phi,
                               struct SzSeamReport *out);

/**
 * Chart coordinates of the unordered pair `{p, q}`; the result does not
 * depend on the order of the two points.
 *
 * # Safety
 * `p` and `q` must each point to three readable doubles; `out` must be writable.
 */
enum SzStatus sz_canonicalize(const double *p, const double *q, struct SzCanonicalPoint *out);

/**
 * Truncated delta state at direction `r0`, in the body-K3 basis.
 *
 * # Safety
 * `r0` must point to three readable doubles; `out` must be writable.
 */
enum SzStatus sz_point_state(const double *r0, uint32_t l_max, struct SzState **out);

/**
 * Re-expresses a body-K3 state in the body-K1 eigenbasis.
 *
 * # Safety
 * `state` must be a live handle; `out` must be writable.
 */
enum SzStatus sz_state_to_body_k1(const struct SzState *state, struct SzState **out);

/**
 * Keeps only the components with `l` of the given parity (0 even, 1 odd).
 *
 * # Safety
 * `state` must be a live handle; `out` must be writable.
 */
enum SzStatus sz_state_orbital_part(const struct SzState *state,
                                    uint32_t parity,
                                    struct SzState **out);

/**
 * # Safety
 * `json` must be a NUL-terminated string; `out` must be writable.
 */
enum SzStatus sz_state_from_json(const char *json, struct SzState **out);

/**
 * Serializes a state; free the result with [`sz_string_free`].
 *
 * # Safety
 * `state` must be a live handle; `out` must be writable.
 */
enum SzStatus sz_state_to_json(const struct SzState *state, char **out);

/**
 * # Safety
 * `state` must be NULL or a handle not yet freed.
 */
void sz_state_free(struct SzState *state);

/**
 * Fits `exp(i pi K1) s = lambda s` for a body-K1 state.
 *
 * # Safety
 * `state` must be a live handle; `out` must be writable.
 */
enum SzStatus sz_superselection_check(const struct SzState *state,
                                      double tol,
                                      struct SzPhaseFit *out);

/**
 * Laplacian spectrum restricted to expansions that glue across the seam.
 *
 * # Safety
 * `out` must be writable.
 */
enum SzStatus sz_spectrum_compute(uint32_t l_max,
                                  size_t n_samples,
                                  double cluster_tol,
                                  struct SzSpectrum **out);

/**
 * Number of distinct eigenvalues; 0 for a NULL handle.
 *
 * # Safety
 * `spectrum` must be NULL or a live handle.
 */
size_t sz_spectrum_len(const struct SzSpectrum *spectrum);

/**
 * Dimension of the admissible subspace; 0 for a NULL handle.
 *
 * # Safety
 * `spectrum` must be NULL or a live handle.
 */
size_t sz_spectrum_null_dimension(const struct SzSpectrum *spectrum);

/**
 * Eigenvalue and multiplicity of level `index`, ascending.
 *
 * # Safety
 * `spectrum` must be a live handle; `value` and `multiplicity` must be writable.
 */
enum SzStatus sz_spectrum_level(const struct SzSpectrum *spectrum,
                                size_t index,
                                double *value,
                                size_t *multiplicity);

/**
 * Serializes a spectrum; free the result with [`sz_string_free`].
 *
 * # Safety
 * `spectrum` must be a live handle; `out` must be writable.
 */
enum SzStatus sz_spectrum_to_json(const struct SzSpectrum *spectrum, char **out);

/**
 * # Safety
 * `spectrum` must be NULL or a handle not yet freed.
 */
void sz_spectrum_free(struct SzSpectrum *spectrum);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* SPINZERO_H */
