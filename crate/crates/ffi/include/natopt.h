#ifndef NATOPT_H
#define NATOPT_H

/* This file is generated by cbindgen from natopt-ffi; do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stdint.h>
#include <stdlib.h>

/**
 * Result of every fallible call.
 */
typedef enum {
  NATOPT_STATUS_OK = 0,
  /**
   * A required pointer argument was NULL.
   */
  NATOPT_STATUS_NULL_POINTER = 1,
  /**
   * A string argument was not valid UTF-8.
   */
  NATOPT_STATUS_INVALID_UTF8 = 2,
  /**
   * An argument failed validation (bad JSON, bad bounds, bad budget).
   */
  NATOPT_STATUS_INVALID_ARGUMENT = 3,
  /**
   * An algorithm or problem name the toolkit does not know.
   */
  NATOPT_STATUS_UNKNOWN_NAME = 4,
  /**
   * The operation failed at runtime.
   */
  NATOPT_STATUS_RUNTIME_ERROR = 5,
  /**
   * A panic was caught at the FFI boundary.
   */
  NATOPT_STATUS_PANIC = 6,
} NatoptStatus;

/**
 * Opaque optimization problem handle.
 */
typedef struct NatoptProblem NatoptProblem;

/**
 * Opaque run-result handle.
 */
typedef struct NatoptRunResult NatoptRunResult;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Library version as a static NUL-terminated string.
 */
const char *natopt_version(void);

/**
 * Static description of a status code.
 */
const char *natopt_status_message(NatoptStatus status);

/**
 * Create a benchmark problem by name (`sphere`, `rastrigin`, `ackley`,
 * `rosenbrock`) at the given dimension.
 */
NatoptStatus natopt_problem_new(const char *name, uintptr_t dimension, NatoptProblem **out);

/**
 * Create the constrained multi-island problem. `policy` is `"reject"` or
 * `"repair"`.
 */
NatoptStatus natopt_problem_island(int64_t grid_extent,
                                   double sharpness,
                                   const char *policy,
                                   NatoptProblem **out);

/**
 * Decision-space dimension of a problem.
 */
uintptr_t natopt_problem_dimension(const NatoptProblem *problem);

/**
 * Release a problem handle. NULL is a no-op.
 */
void natopt_problem_free(NatoptProblem *problem);

/**
 * Execute one seeded optimization run.
 *
 * `algorithm` is one of `gd`, `de`, `pso`, `fa`, `ba`, `cs`, `fpa`, `ga`,
 * `sa`. `params_json` is an optional JSON object of parameter overrides
 * (e.g. `{"F": 0.9}`); pass NULL for the defaults. Identical
 * `(seed, stream_id)` pairs reproduce the run bit-exactly.
 */
NatoptStatus natopt_run(const NatoptProblem *problem,
                        const char *algorithm,
                        const char *params_json,
                        uintptr_t population,
                        uint64_t budget,
                        uint64_t seed,
                        uint64_t stream_id,
                        NatoptRunResult **out);

/**
 * Final best fitness of a run; NaN for a NULL handle.
 */
double natopt_result_best_fitness(const NatoptRunResult *result);

/**
 * Objective evaluations the run actually spent.
 */
uint64_t natopt_result_evals_used(const NatoptRunResult *result);

/**
 * Dimension of the best position.
 */
uintptr_t natopt_result_dimension(const NatoptRunResult *result);

/**
 * Copy the best position into `buffer` (exactly `len` == dimension).
 */
NatoptStatus natopt_result_best_position(const NatoptRunResult *result,
                                         double *buffer,
                                         uintptr_t len);

/**
 * Number of entries in the best-so-far trace.
 */
uintptr_t natopt_result_trace_len(const NatoptRunResult *result);

/**
 * Read trace entry `index` as (evaluation count, best fitness so far).
 */
NatoptStatus natopt_result_trace_entry(const NatoptRunResult *result,
                                       uintptr_t index,
                                       uint64_t *evals_out,
                                       double *fitness_out);

/**
 * Release a run-result handle. NULL is a no-op.
 */
void natopt_result_free(NatoptRunResult *result);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* NATOPT_H */
