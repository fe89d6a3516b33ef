#ifndef FUZZY_LSDE_H
#define FUZZY_LSDE_H

/* Generated by cbindgen from crates/ffi/src/lib.rs. Do not edit. */

#include <stddef.h>
#include <stdint.h>

// Result code of every fallible call.
typedef enum FlsdeStatus {
  FLSDE_STATUS_OK = 0,
  FLSDE_STATUS_NULL_POINTER = 1,
  FLSDE_STATUS_INVALID_INPUT = 2,
  FLSDE_STATUS_NUMERIC = 3,
  FLSDE_STATUS_PANIC = 4,
} FlsdeStatus;

// Problem under construction: matrix, forcing, initial values, optional crisp part.
typedef struct FlsdeProblem FlsdeProblem;

// Solved problem, queried for regions and memberships.
typedef struct FlsdeSolution FlsdeSolution;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

// Copies the calling thread's last error message into `buf` (NUL-terminated,
// truncated to `len` bytes) and returns the full message length plus one.
// Returns 0 when no error has been recorded.
size_t flsde_last_error(char *buf, size_t len);

// Creates a problem `x' = A x` with `A` given as `n * n` row-major values.
// Forcing starts at zero and every initial value must be set before solving.
enum FlsdeStatus flsde_problem_new(size_t n, const double *a, double t0, struct FlsdeProblem **out);

// Releases a problem. Null is ignored.
void flsde_problem_free(struct FlsdeProblem *problem);

// Sets forcing component `i` to the polynomial with ascending coefficients.
enum FlsdeStatus flsde_problem_set_forcing(struct FlsdeProblem *problem,
                                           size_t i,
                                           const double *coeffs,
                                           size_t len);

// Sets initial value `i` to the triangular number `(a, c, b)`.
enum FlsdeStatus flsde_problem_set_triangular(struct FlsdeProblem *problem,
                                              size_t i,
                                              double a,
                                              double c,
                                              double b);

// Sets initial value `i` from branch values sampled on `len` increasing levels.
enum FlsdeStatus flsde_problem_set_parametric(struct FlsdeProblem *problem,
                                              size_t i,
                                              const double *levels,
                                              const double *lower,
                                              const double *upper,
                                              size_t len);

// Overrides the crisp part of the initial value; each entry must lie in the core.
enum FlsdeStatus flsde_problem_set_b_cr(struct FlsdeProblem *problem,
                                        const double *b_cr,
                                        size_t len);

// Solves the problem on `[t0, t_end]` with RK4 step `step`.
enum FlsdeStatus flsde_solve(const struct FlsdeProblem *problem,
                             double t_end,
                             double step,
                             struct FlsdeSolution **out);

// Parses a JSON scenario and solves it on its own horizon and step.
enum FlsdeStatus flsde_solve_scenario_json(const char *json, struct FlsdeSolution **out);

// Releases a solution. Null is ignored.
void flsde_solution_free(struct FlsdeSolution *solution);

// State dimension, or 0 for a null handle.
size_t flsde_solution_dim(const struct FlsdeSolution *solution);

// Writes the `n` entries of the crisp part of the initial value.
enum FlsdeStatus flsde_solution_b_cr(const struct FlsdeSolution *solution, double *out);

// Writes the crisp trajectory state at `t` (n entries).
enum FlsdeStatus flsde_solution_crisp_state(const struct FlsdeSolution *solution,
                                            double t,
                                            double *out);

// Membership grade of the `n`-vector `point` in the solution at time `t`.
enum FlsdeStatus flsde_solution_membership(const struct FlsdeSolution *solution,
                                           const double *point,
                                           double t,
                                           double *out);

// The `alpha`-cut at `t` as `{center + sum c_i g_i : lo_i <= c_i <= hi_i}`.
// `center`, `lo`, `hi` receive n entries; `generators` receives n * n
// entries with generator `i` stored contiguously at offset `i * n`.
enum FlsdeStatus flsde_solution_alpha_cut(const struct FlsdeSolution *solution,
                                          double t,
                                          double alpha,
                                          double *center,
                                          double *generators,
                                          double *lo,
                                          double *hi);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* FUZZY_LSDE_H */
