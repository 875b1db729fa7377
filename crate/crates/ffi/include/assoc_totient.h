#ifndef ASSOC_TOTIENT_H
#define ASSOC_TOTIENT_H

/* Generated by cbindgen from crates/ffi/src/lib.rs. Do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

// Status codes. Values 2 to 7 match the CLI exit codes for the same class.
typedef enum AtStatus {
  AT_STATUS_OK = 0,
  // A verification ran and did not hold.
  AT_STATUS_VERIFICATION_FAILED = 1,
  AT_STATUS_PARSE = 2,
  AT_STATUS_INVALID_SPEC = 3,
  AT_STATUS_OUT_OF_RANGE = 4,
  AT_STATUS_NUMERICAL = 5,
  AT_STATUS_UNAVAILABLE = 6,
  AT_STATUS_IO = 7,
  AT_STATUS_NULL_POINTER = 8,
  AT_STATUS_PANIC = 9,
} AtStatus;

// Opaque product handle.
typedef struct AtProduct AtProduct;

// Opaque handle: float tables of one product plus its constants.
typedef struct AtTables AtTables;

typedef struct AtComplex {
  double re;
  double im;
} AtComplex;

// A value and a radius it is known or estimated to lie within.
typedef struct AtValue {
  double re;
  double im;
  double bound;
  // 1 when the bound is rigorous, 0 when heuristic.
  int32_t rigorous;
} AtValue;

typedef struct AtDecomposition {
  struct AtValue e2;
  struct AtValue x_f1;
  struct AtValue half_g1;
  struct AtComplex residual;
  double residual_bound;
} AtDecomposition;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

// Message for the last failure on this thread, or null. Valid until the
// next failing call on the same thread.
const char *at_last_error(void);

// Library version, a static NUL-terminated string.
const char *at_version(void);

// The Riemann zeta function as a product.
enum AtStatus at_product_zeta(struct AtProduct **out);

// `L(s, (D|.))` for a fundamental-style discriminant `d`.
enum AtStatus at_product_kronecker(int64_t d, struct AtProduct **out);

// Parses a JSON product specification (NUL-terminated UTF-8).
enum AtStatus at_product_from_json(const char *json, struct AtProduct **out);

// Releases a product; null is ignored.
void at_product_free(struct AtProduct *product);

// `gamma(p)` for a prime `p`.
enum AtStatus at_product_gamma(const struct AtProduct *product, uint64_t p, struct AtComplex *out);

// `C(F)` from the product over primes up to `prime_cutoff`, with a tail bound.
enum AtStatus at_c_constant(const struct AtProduct *product,
                            uint64_t prime_cutoff,
                            struct AtValue *out);

// Float tables up to `n` and the constants `C(F)`, `A_1`.
enum AtStatus at_tables_new(const struct AtProduct *product,
                            size_t n,
                            uint64_t prime_cutoff,
                            uint64_t a1_cutoff,
                            struct AtTables **out);

void at_tables_free(struct AtTables *tables);

// `E(x, F)`, or `E_2(x, F)` when `symmetric` is nonzero.
enum AtStatus at_error_term(const struct AtTables *tables,
                            int64_t num,
                            int64_t den,
                            int32_t symmetric,
                            struct AtValue *out);

// `f_1(x, F)`.
enum AtStatus at_f1(const struct AtTables *tables, int64_t num, int64_t den, struct AtValue *out);

// `g_1(x, F)`.
enum AtStatus at_g1(const struct AtTables *tables, int64_t num, int64_t den, struct AtValue *out);

// `E_2 = x f_1 + g_1/2` at `x >= 1`.
enum AtStatus at_decompose(const struct AtTables *tables,
                           int64_t num,
                           int64_t den,
                           struct AtDecomposition *out);

// Checks the constant-free reduced identity at `x` in exact rational
// arithmetic. Returns `Ok` when it holds and `VerificationFailed` otherwise.
enum AtStatus at_verify_identity(const struct AtProduct *product, int64_t num, int64_t den);

// Sup over the grid of `|F_1 - int_0^x F_1(t)/t dt - E_2|` for the family
// member with parameter `a`, on `[0, x_end]` with step `h = 1/m`.
enum AtStatus at_volterra_residual(const struct AtTables *tables,
                                   double x_end,
                                   double h,
                                   struct AtComplex a,
                                   double *sup);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* ASSOC_TOTIENT_H */
