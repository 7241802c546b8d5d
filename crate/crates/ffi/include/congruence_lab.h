#ifndef CONGRUENCE_LAB_H
#define CONGRUENCE_LAB_H

#include <stdint.h>
#include <stddef.h>

/*
 Status codes returned by every fallible function.
 */
typedef enum ClStatus {
  CL_STATUS_OK = 0,
  CL_STATUS_INVALID_ARGUMENT = 1,
  CL_STATUS_PRECISION = 2,
  CL_STATUS_IO = 3,
  CL_STATUS_HYPOTHESIS = 4,
  CL_STATUS_COMPUTATION = 5,
  CL_STATUS_NULL_POINTER = 6,
  CL_STATUS_PANIC = 7,
} ClStatus;

/*
 A list of congruence certificates.
 */
typedef struct ClCertificates ClCertificates;

/*
 A power series with coefficients in `F_ℓ`.
 */
typedef struct ClSeries ClSeries;

/*
 The progression `modulus·n + residue` enclosing a claim. `gap_prime` is
 zero for a plain progression, otherwise the claim excludes `n` divisible
 by it.
 */
typedef struct ClClaim {
  uint64_t modulus;
  uint64_t residue;
  uint64_t gap_prime;
} ClClaim;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/*
 Copies the last error message of this thread into `buf` (NUL
 terminated, truncated to `len`). Returns the buffer size needed for the
 full message, or 0 if there is none.

 # Safety
 `buf` must be null or point to `len` writable bytes.
 */
size_t cl_last_error(char *buf, size_t len);

/*
 Library version as a static NUL-terminated string.
 */
const char *cl_version(void);

/*
 q-expansion of a named level-one form (`"delta"`, `"e4^2*e6"`, ...) mod
 the prime `ell` to the given precision.

 # Safety
 `form` must be a NUL-terminated string and `out` a valid pointer.
 */
enum ClStatus cl_series_form(const char *form,
                             uint64_t ell,
                             int64_t precision,
                             struct ClSeries **out);

/*
 Reads a series file written by `congruence-lab gen` and reduces it mod
 `ell`.

 # Safety
 `path` must be a NUL-terminated string and `out` a valid pointer.
 */
enum ClStatus cl_series_read(const char *path, uint64_t ell, struct ClSeries **out);

/*
 # Safety
 `s` must be a live handle and `out` a valid pointer.
 */
enum ClStatus cl_series_precision(const struct ClSeries *s, int64_t *out);

/*
 Coefficient of `q^n` as a residue in `[0, ℓ)`.

 # Safety
 `s` must be a live handle and `out` a valid pointer.
 */
enum ClStatus cl_series_coeff(const struct ClSeries *s, int64_t n, uint64_t *out);

/*
 # Safety
 `s` must be null or a handle not yet freed.
 */
void cl_series_free(struct ClSeries *s);

/*
 Maximal progressions with modulus up to `max_modulus` on which the series
 vanishes for every index up to `bound`, each tested on at least `support`
 indices.

 # Safety
 `s` must be a live handle and `out` a valid pointer.
 */
enum ClStatus cl_scan(const struct ClSeries *s,
                      uint64_t max_modulus,
                      int64_t bound,
                      uint64_t support,
                      struct ClCertificates **out);

/*
 Number of certificates, or 0 for a null handle.

 # Safety
 `c` must be null or a live handle.
 */
size_t cl_certificates_len(const struct ClCertificates *c);

/*
 # Safety
 `c` must be a live handle and `out` a valid pointer.
 */
enum ClStatus cl_certificates_claim(const struct ClCertificates *c,
                                    size_t index,
                                    struct ClClaim *out);

/*
 The certificates as newline-delimited JSON. Release the string with
 [`cl_string_free`].

 # Safety
 `c` must be a live handle and `out` a valid pointer.
 */
enum ClStatus cl_certificates_json(const struct ClCertificates *c, char **out);

/*
 # Safety
 `c` must be null or a handle not yet freed.
 */
void cl_certificates_free(struct ClCertificates *c);

/*
 # Safety
 `s` must be null or a string returned by this library and not yet freed.
 */
void cl_string_free(char *s);

/*
 Decides by the Hecke criterion whether the named form vanishes mod `ell`
 on `p^m n + beta` with `p ∤ n`. Writes 1 or 0 to `certified`.

 # Safety
 `form` must be a NUL-terminated string and `certified` a valid pointer.
 */
enum ClStatus cl_certify(const char *form,
                         uint64_t ell,
                         uint64_t p,
                         uint64_t m,
                         int64_t beta,
                         int32_t *certified);

/*
 Dimension of the submodule of the permutation module on `P^1(Z/modulus)`
 over `F_ℓ(ζ_modulus)` generated by the vector attached to `beta`.

 # Safety
 `out` must be a valid pointer.
 */
enum ClStatus cl_rep_dimension(uint64_t modulus, uint64_t ell, int64_t beta, size_t *out);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* CONGRUENCE_LAB_H */
