#ifndef QCOORD_FFI_H
#define QCOORD_FFI_H

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

typedef enum QcOrder {
  QC_ORDER_ROW_MAJOR = 0,
  QC_ORDER_OPPOSITE = 1,
} QcOrder;

typedef enum QcStatus {
  QC_STATUS_OK = 0,
  QC_STATUS_NULL_POINTER = 1,
  QC_STATUS_INVALID_UTF8 = 2,
  QC_STATUS_PARSE = 3,
  QC_STATUS_INVALID_ARGUMENT = 4,
  QC_STATUS_UNSUPPORTED = 5,
  /*
   The check ran and at least one case failed.
   */
  QC_STATUS_CHECK_FAILED = 6,
  QC_STATUS_INTERNAL = 7,
} QcStatus;

typedef enum QcVariant {
  QC_VARIANT_M = 0,
  QC_VARIANT_GL = 1,
  QC_VARIANT_SL = 2,
} QcVariant;

/*
 An algebra over `Z[q, q^-1]` or over `Z[q]/(phi_ell)`.
 */
typedef struct QcAlgebra QcAlgebra;

/*
 Frobenius data at an odd root of unity.
 */
typedef struct QcFrobenius QcFrobenius;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/*
 Message for the last failed call on this thread, or NULL. The pointer is
 valid until the next failing call on the same thread; do not free it.
 */
const char *qc_last_error(void);

/*
 Releases a string returned by this library. NULL is ignored.

 # Safety
 `s` must come from this library and not have been freed.
 */
void qc_string_free(char *s);

/*
 Creates an algebra of size `n`. `ell = 0` keeps `q` generic; an odd
 `ell >= 1` specializes `q` to a primitive `ell`-th root of unity.

 # Safety
 `out` must be a valid pointer.
 */
enum QcStatus qc_algebra_new(size_t n,
                             enum QcVariant variant,
                             enum QcOrder order,
                             uint32_t ell,
                             struct QcAlgebra **out);

/*
 # Safety
 `alg` must come from [`qc_algebra_new`] and not have been freed. NULL is ignored.
 */
void qc_algebra_free(struct QcAlgebra *alg);

/*
 Normal form of the expression `expr`, e.g. `"t[2,2] t[1,1]"`.

 # Safety
 Pointers must be valid; `expr` NUL-terminated.
 */
enum QcStatus qc_normal_form(const struct QcAlgebra *alg, const char *expr, char **out);

/*
 Normal form of the product `lhs * rhs`.

 # Safety
 Pointers must be valid; strings NUL-terminated.
 */
enum QcStatus qc_multiply(const struct QcAlgebra *alg,
                          const char *lhs,
                          const char *rhs,
                          char **out);

/*
 The quantum determinant expanded in ordered monomials.

 # Safety
 Pointers must be valid.
 */
enum QcStatus qc_determinant(const struct QcAlgebra *alg, char **out);

/*
 Runs a check (`central`, `pbw-confluence`, `iso`, `identities`) and writes
 the JSON report to `out`. `bound` is the word length for `pbw-confluence`
 and the monomial degree for `identities`. Returns `CheckFailed` when a case
 fails; the report is written in that case too.

 # Safety
 Pointers must be valid; `name` NUL-terminated.
 */
enum QcStatus qc_algebra_check(const struct QcAlgebra *alg,
                               const char *name,
                               uint32_t bound,
                               char **out);

/*
 Frobenius data for `M_n` (`variant = M`) or `GL_n` at odd `ell`.

 # Safety
 `out` must be a valid pointer.
 */
enum QcStatus qc_frobenius_new(size_t n,
                               enum QcVariant variant,
                               uint32_t ell,
                               struct QcFrobenius **out);

/*
 # Safety
 `f` must come from [`qc_frobenius_new`] and not have been freed. NULL is ignored.
 */
void qc_frobenius_free(struct QcFrobenius *f);

/*
 `Phi(expr)`, a polynomial in the classical generators `tbar[i,j]`.

 # Safety
 Pointers must be valid; `expr` NUL-terminated.
 */
enum QcStatus qc_phi(const struct QcFrobenius *f, const char *expr, char **out);

/*
 Image of `expr` under the Nakayama twist.

 # Safety
 Pointers must be valid; `expr` NUL-terminated.
 */
enum QcStatus qc_nakayama(const struct QcFrobenius *f, const char *expr, char **out);

/*
 Runs `frobenius` (centrality of the Frobenius image) or `nakayama` and
 writes the JSON report. `pairs` bounds the pairing sample for `nakayama`
 when the residue basis has more than 81 elements.

 # Safety
 Pointers must be valid; `name` NUL-terminated.
 */
enum QcStatus qc_frobenius_check(const struct QcFrobenius *f,
                                 const char *name,
                                 size_t pairs,
                                 char **out);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* QCOORD_FFI_H */
