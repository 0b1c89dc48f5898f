#ifndef MCLP_H
#define MCLP_H

/* Generated by cbindgen from src/lib.rs. Do not edit. */

#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>

#define MCLP_SOLVER_DP 0

#define MCLP_SOLVER_GREEDY 1

#define MCLP_SOLVER_BRUTE 2

#define MCLP_FLAG_DOMINANCE 1

#define MCLP_FLAG_SYMMETRY 2

#define MCLP_FLAG_GREEDY_BOUND 4

#define MCLP_FLAG_ORDERING 8

#define MCLP_FLAG_PREPROCESS 16

#define MCLP_FLAG_ALL 31

// Result of every fallible call.
typedef enum MclpStatus {
  MCLP_STATUS_OK = 0,
  MCLP_STATUS_NULL_POINTER = 1,
  MCLP_STATUS_INVALID_UTF8 = 2,
  // Malformed JSON or a document of the wrong shape.
  MCLP_STATUS_PARSE_ERROR = 3,
  // Well-formed input that breaks a problem invariant.
  MCLP_STATUS_INVALID_INSTANCE = 4,
  // Brute force would enumerate more subsets than allowed.
  MCLP_STATUS_SOLVER_CAP = 5,
  MCLP_STATUS_INVALID_ARGUMENT = 6,
  // A panic was caught at the boundary. Handles passed in are left untouched.
  MCLP_STATUS_PANIC = 7,
} MclpStatus;

// A validated problem instance.
typedef struct MclpInstance MclpInstance;

// A solver result with its statistics.
typedef struct MclpSolution MclpSolution;

// Solver settings. Start from [`mclp_solve_options_default`].
typedef struct MclpSolveOptions {
  // Bitwise OR of `MCLP_FLAG_*` values.
  uint32_t flags;
  // Frontier size at which the DP truncates and reports inexact. Must be at least 1.
  size_t state_limit;
  // Wall-clock limit in seconds; zero or negative means none.
  double time_limit_seconds;
} MclpSolveOptions;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

// Message for the most recent failure on this thread, or null after a
// success. The pointer stays valid until the next call on this thread.
const char *mclp_last_error_message(void);

// Parses an instance from a NUL-terminated JSON document.
//
// # Safety
// `json` must be null or a valid C string; `out` must be null or writable.
enum MclpStatus mclp_instance_from_json(const char *json, struct MclpInstance **out);

// Generates a seeded synthetic instance from a JSON generator config, for
// example `{"n": 30, "m": 10, "budget": 4, "radius": 20, "seed": 7}`.
//
// # Safety
// Same contract as [`mclp_instance_from_json`].
enum MclpStatus mclp_instance_generate(const char *config_json, struct MclpInstance **out);

// Writes the canonical JSON form of an instance. Free the string with
// [`mclp_string_free`].
//
// # Safety
// `instance` must be null or a live handle; `out` must be null or writable.
enum MclpStatus mclp_instance_to_json(const struct MclpInstance *instance, char **out);

// Number of demand points, or 0 for a null handle.
//
// # Safety
// `instance` must be null or a live handle.
size_t mclp_instance_demand_count(const struct MclpInstance *instance);

// Number of candidate sites, or 0 for a null handle.
//
// # Safety
// `instance` must be null or a live handle.
size_t mclp_instance_site_count(const struct MclpInstance *instance);

// # Safety
// `instance` must be null or a handle not yet freed.
void mclp_instance_free(struct MclpInstance *instance);

// All reductions on, default state limit, no time limit.
struct MclpSolveOptions mclp_solve_options_default(void);

// Solves `instance` with one of the `MCLP_SOLVER_*` solvers. A null
// `options` means [`mclp_solve_options_default`].
//
// # Safety
// `instance` must be a live handle, `options` null or readable, `out`
// writable.
enum MclpStatus mclp_solve(const struct MclpInstance *instance,
                           uint32_t solver,
                           const struct MclpSolveOptions *options,
                           struct MclpSolution **out);

// Covered weight, or NaN for a null handle.
//
// # Safety
// `solution` must be null or a live handle.
double mclp_solution_objective(const struct MclpSolution *solution);

// Covered weight as a percentage of total weight, or NaN for a null handle.
//
// # Safety
// `solution` must be null or a live handle.
double mclp_solution_coverage_percent(const struct MclpSolution *solution);

// Whether the result is proven optimal. False for greedy and for
// truncated DP runs.
//
// # Safety
// `solution` must be null or a live handle.
bool mclp_solution_is_exact(const struct MclpSolution *solution);

// # Safety
// `solution` must be null or a live handle.
size_t mclp_solution_selected_count(const struct MclpSolution *solution);

// Copies up to `capacity` selected site ids (ascending) into `buffer` and
// returns the total number selected, so a short buffer can be detected.
//
// # Safety
// `solution` must be null or a live handle; `buffer` must hold `capacity`
// elements unless `capacity` is 0.
size_t mclp_solution_copy_selected(const struct MclpSolution *solution,
                                   size_t *buffer,
                                   size_t capacity);

// Writes the solution in the same JSON layout as the command-line tool.
//
// # Safety
// `solution` must be null or a live handle; `out` must be null or writable.
enum MclpStatus mclp_solution_to_json(const struct MclpSolution *solution, char **out);

// # Safety
// `solution` must be null or a handle not yet freed.
void mclp_solution_free(struct MclpSolution *solution);

// # Safety
// `s` must be null or a string returned by this library and not yet freed.
void mclp_string_free(char *s);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* MCLP_H */
