#ifndef SSVSC_H
#define SSVSC_H

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

typedef enum SsvscMethod {
  SSVSC_METHOD_SC = 0,
  SSVSC_METHOD_SSV = 1,
  SSVSC_METHOD_SV = 2,
  SSVSC_METHOD_SSV_SE = 3,
  SSVSC_METHOD_SSV_PUT = 4,
} SsvscMethod;

typedef enum SsvscSolveStatus {
  SSVSC_SOLVE_STATUS_SAT = 10,
  SSVSC_SOLVE_STATUS_UNSAT = 20,
  SSVSC_SOLVE_STATUS_BUDGET = 0,
} SsvscSolveStatus;

typedef enum SsvscStatus {
  SSVSC_STATUS_OK = 0,
  SSVSC_STATUS_NULL_POINTER = 1,
  SSVSC_STATUS_INVALID_MATRIX = 2,
  SSVSC_STATUS_INVALID_ARGUMENT = 3,
  SSVSC_STATUS_NOT_LINEAR = 4,
  SSVSC_STATUS_TOO_LARGE = 5,
  SSVSC_STATUS_BUFFER_TOO_SMALL = 6,
  SSVSC_STATUS_SOLVER = 7,
  SSVSC_STATUS_VERIFICATION_FAILED = 8,
  SSVSC_STATUS_IO = 9,
  SSVSC_STATUS_PANIC = 10,
} SsvscStatus;

typedef enum SsvscTarget {
  SSVSC_TARGET_COUNTEREXAMPLE = 0,
  SSVSC_TARGET_MINIMAL_COUNTEREXAMPLE = 1,
  SSVSC_TARGET_SINGLE_SC_WINNER = 2,
  SSVSC_TARGET_SINGLE_SC_WINNER_MINIMAL = 3,
  SSVSC_TARGET_REVERSAL_SYMMETRY = 4,
} SsvscTarget;

/**
 * Opaque margin matrix handle.
 */
typedef struct SsvscMatrix SsvscMatrix;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Library version as a static NUL-terminated string.
 */
const char *ssvsc_version(void);

/**
 * Message for the last failed call on this thread; empty after a success.
 * Valid until the next `ssvsc_*` call on the same thread.
 */
const char *ssvsc_last_error(void);

/**
 * Builds a matrix from `n * n` row-major weights.
 *
 * # Safety
 * `weights` must point to `n * n` readable values and `out_m` must be writable.
 */
enum SsvscStatus ssvsc_matrix_new(size_t n, const int64_t *weights, struct SsvscMatrix **out_m);

/**
 * Reads a matrix JSON file.
 *
 * # Safety
 * `path` must be a NUL-terminated string and `out_m` must be writable.
 */
enum SsvscStatus ssvsc_matrix_load(const char *path, struct SsvscMatrix **out_m);

/**
 * Releases a handle. Null is ignored.
 *
 * # Safety
 * `m` must be null or a handle from this library not already freed.
 */
void ssvsc_matrix_free(struct SsvscMatrix *m);

/**
 * # Safety
 * `m` must be a live handle and `n` writable.
 */
enum SsvscStatus ssvsc_matrix_size(const struct SsvscMatrix *m, size_t *n);

/**
 * # Safety
 * `m` must be a live handle and `w` writable.
 */
enum SsvscStatus ssvsc_matrix_weight(const struct SsvscMatrix *m, size_t a, size_t b, int64_t *w);

/**
 * Whether every off-diagonal pair has a distinct non-zero strength.
 *
 * # Safety
 * `m` must be a live handle and `linear` writable.
 */
enum SsvscStatus ssvsc_matrix_is_linear(const struct SsvscMatrix *m, bool *linear);

/**
 * Whether `a` defeats `b` under Split Cycle.
 *
 * # Safety
 * `m` must be a live handle and `defeats` writable.
 */
enum SsvscStatus ssvsc_sc_defeats(const struct SsvscMatrix *m, size_t a, size_t b, bool *defeats);

/**
 * Writes the winners (ascending) into `buf`, and their count into `len`.
 * If `cap` is too small nothing is written to `buf`, `len` still holds
 * the count and the status is `BufferTooSmall`.
 *
 * # Safety
 * `m` must be a live handle, `buf` must have room for `cap` values (or be
 * null with `cap == 0`) and `len` must be writable.
 */
enum SsvscStatus ssvsc_winners(const struct SsvscMatrix *m,
                               enum SsvscMethod method,
                               size_t *buf,
                               size_t cap,
                               size_t *len);

/**
 * Builds and solves the encoding for `n` alternatives with symmetry
 * breaking. `solver_cmd` names an external DIMACS solver (the CNF path is
 * appended); null selects the built-in engine. `timeout_ms == 0` means no
 * wall-clock limit. On SAT, `model` (if non-null) receives the verified
 * matrix; otherwise it is set to null.
 *
 * # Safety
 * `solver_cmd` must be null or NUL-terminated, `result` writable and
 * `model` null or writable.
 */
enum SsvscStatus ssvsc_prove(size_t n,
                             enum SsvscTarget target,
                             uint64_t timeout_ms,
                             const char *solver_cmd,
                             enum SsvscSolveStatus *result,
                             struct SsvscMatrix **model);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* SSVSC_H */
