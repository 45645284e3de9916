#ifndef TOTIENTS_H
#define TOTIENTS_H

/* Generated by cbindgen from totients-capi; do not edit by hand. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

/**
 * Status codes for every fallible entry point.
 */
typedef enum TotStatus {
  TOT_STATUS_OK = 0,
  /**
   * Invalid input (bad residue class, nontotient, overflow, ...).
   */
  TOT_STATUS_DOMAIN_ERROR = 1,
  /**
   * A memory or scan budget was exceeded.
   */
  TOT_STATUS_RESOURCE_ERROR = 2,
  /**
   * A required pointer argument was null.
   */
  TOT_STATUS_NULL_POINTER = 3,
} TotStatus;

/**
 * Horizon policy for N1 queries.
 */
typedef enum TotHorizonPolicy {
  TOT_HORIZON_POLICY_CONSERVATIVE = 0,
  TOT_HORIZON_POLICY_ROSSER_SCHOENFELD = 1,
} TotHorizonPolicy;

/**
 * Opaque solution set of phi(x) = m.
 */
typedef struct TotPreimage TotPreimage;

/**
 * Opaque tabulated phi(1..=n).
 */
typedef struct TotSieve TotSieve;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Euler's phi of n. Fails on n = 0.
 */
enum TotStatus tot_euler_phi(uint64_t n, uint64_t *out);

/**
 * Deterministic primality for the full 64-bit range.
 */
enum TotStatus tot_is_prime(uint64_t n, bool *out);

/**
 * Product of all primes <= p. Fails when p is not prime or the product
 * overflows 64 bits.
 */
enum TotStatus tot_primorial(uint64_t p, uint64_t *out);

/**
 * Complete solution set of phi(x) = m as an opaque handle. Release with
 * `tot_preimage_free`.
 */
enum TotStatus tot_inverse_phi(uint64_t m, struct TotPreimage **out);

/**
 * Number of solutions A(m); 0 for a null handle.
 */
size_t tot_preimage_len(const struct TotPreimage *pre);

/**
 * Copies up to `cap` solutions (sorted increasing) into `buf`; returns the
 * number copied.
 */
size_t tot_preimage_solutions(const struct TotPreimage *pre, uint64_t *buf, size_t cap);

/**
 * N2(m) = max of the preimage; DomainError when the preimage is empty.
 */
enum TotStatus tot_preimage_n2(const struct TotPreimage *pre, uint64_t *out);

/**
 * N3(m) = min of the preimage; DomainError when the preimage is empty.
 */
enum TotStatus tot_preimage_n3(const struct TotPreimage *pre, uint64_t *out);

void tot_preimage_free(struct TotPreimage *pre);

/**
 * Builds phi(1..=horizon) within a byte budget. Release with
 * `tot_sieve_free`.
 */
enum TotStatus tot_sieve_build(uint64_t horizon, uint64_t budget_bytes, struct TotSieve **out);

uint64_t tot_sieve_horizon(const struct TotSieve *sieve);

/**
 * Tabulated phi(k); DomainError when k is outside [1, horizon].
 */
enum TotStatus tot_sieve_phi(const struct TotSieve *sieve, uint64_t k, uint64_t *out);

void tot_sieve_free(struct TotSieve *sieve);

/**
 * N1(m) from a sieve whose horizon covers the policy's safe bound;
 * ResourceError when it does not.
 */
enum TotStatus tot_n1(const struct TotSieve *sieve,
                      uint64_t m,
                      enum TotHorizonPolicy policy,
                      uint64_t *out);

/**
 * K_{q,r} certificate as a JSON string; release with `tot_string_free`.
 */
enum TotStatus tot_family_kmax_json(uint64_t q, uint32_t r, char **out);

/**
 * k_{q,r} certificate as a JSON string; release with `tot_string_free`.
 */
enum TotStatus tot_family_kmin_json(uint64_t q, uint32_t r, char **out);

/**
 * R(r1,r2) certificate as a JSON string; release with `tot_string_free`.
 */
enum TotStatus tot_family_r_json(uint32_t r1, uint32_t r2, char **out);

/**
 * Fermat-product certificate as a JSON string; release with
 * `tot_string_free`.
 */
enum TotStatus tot_family_fermat_json(uint32_t k, uint32_t a, char **out);

/**
 * Frees a string returned by the `_json` functions.
 */
void tot_string_free(char *s);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* TOTIENTS_H */
