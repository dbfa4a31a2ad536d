#ifndef SPARSE_SDP_H
#define SPARSE_SDP_H

/* Generated by cbindgen from src/lib.rs; do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

typedef enum SsdpStatus {
  SSDP_STATUS_OK = 0,
  SSDP_STATUS_NULL_POINTER = 1,
  SSDP_STATUS_INVALID_ARGUMENT = 2,
  SSDP_STATUS_PARSE = 3,
  SSDP_STATUS_NOT_POSITIVE_DEFINITE = 4,
  SSDP_STATUS_NOT_CHORDAL = 5,
  SSDP_STATUS_INFEASIBLE = 6,
  SSDP_STATUS_DEPENDENT_CONSTRAINTS = 7,
  SSDP_STATUS_BUFFER_TOO_SMALL = 8,
  SSDP_STATUS_PANIC = 9,
  SSDP_STATUS_INTERNAL = 10,
} SsdpStatus;

/**
 * Solver outcome carried by a report.
 */
typedef enum SsdpSolveStatus {
  SSDP_SOLVE_STATUS_CONVERGED = 0,
  SSDP_SOLVE_STATUS_ITERATION_LIMIT = 1,
  SSDP_SOLVE_STATUS_STALLED = 2,
} SsdpSolveStatus;

typedef struct SsdpCut SsdpCut;

typedef struct SsdpGraph SsdpGraph;

typedef struct SsdpProblem SsdpProblem;

typedef struct SsdpReport SsdpReport;

/**
 * Solver settings. Obtain defaults from [`ssdp_config_default`].
 */
typedef struct SsdpConfig {
  /**
   * Potential weight `γ`; any value `<= 0` selects `√n`.
   */
  double gamma;
  double gap_tol;
  size_t extra_iters;
  double cg_rel_tol;
  /**
   * 0 selects the number of constraints.
   */
  size_t cg_max_iter;
  size_t max_main_iters;
  /**
   * 4 or 2.
   */
  uint32_t directions;
  size_t potential_descent_max_steps;
} SsdpConfig;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Message for the last failed call on this thread, or null if none. The pointer stays
 * valid until the next failing call on the same thread.
 */
const char *ssdp_last_error(void);

struct SsdpConfig ssdp_config_default(void);

/**
 * Graph on `n` vertices from `m` edges `(rows[k], cols[k])`, 0-based. `weights` may be
 * null for unit weights.
 *
 * # Safety
 * `rows` and `cols` (and `weights` when non-null) must point to `m` readable elements.
 */
enum SsdpStatus ssdp_graph_new(size_t n,
                               size_t m,
                               const size_t *rows,
                               const size_t *cols,
                               const double *weights,
                               struct SsdpGraph **out);

/**
 * Parses the edge-list format: `n m`, then `m` lines `i j [w]`, 1-based.
 *
 * # Safety
 * `text` must be a nul-terminated string.
 */
enum SsdpStatus ssdp_graph_parse(const char *text, struct SsdpGraph **out);

/**
 * # Safety
 * `out` must be writable.
 */
enum SsdpStatus ssdp_graph_random(size_t n, size_t m, uint64_t seed, struct SsdpGraph **out);

/**
 * # Safety
 * `g` must be null or a handle from this library that has not been freed.
 */
void ssdp_graph_free(struct SsdpGraph *g);

/**
 * # Safety
 * `g` must be a live graph handle; `n` and `m` must be writable.
 */
enum SsdpStatus ssdp_graph_size(const struct SsdpGraph *g, size_t *n, size_t *m);

/**
 * Problem read from SDPA sparse text (single block).
 *
 * # Safety
 * `text` must be a nul-terminated string; `out` must be writable.
 */
enum SsdpStatus ssdp_problem_from_sdpa(const char *text, struct SsdpProblem **out);

/**
 * MAX-CUT relaxation of `g`.
 *
 * # Safety
 * `g` must be a live graph handle; `out` must be writable.
 */
enum SsdpStatus ssdp_problem_maxcut(const struct SsdpGraph *g, struct SsdpProblem **out);

/**
 * # Safety
 * `p` must be null or a live problem handle.
 */
void ssdp_problem_free(struct SsdpProblem *p);

/**
 * Matrix order `n` and constraint count `m`.
 *
 * # Safety
 * `p` must be a live problem handle; `n` and `m` must be writable.
 */
enum SsdpStatus ssdp_problem_size(const struct SsdpProblem *p, size_t *n, size_t *m);

/**
 * Solves from the built-in strictly feasible start. A run that stops without
 * converging still yields a report; check [`ssdp_report_status`].
 *
 * # Safety
 * `p` must be a live problem handle, `config` null (defaults) or readable, `out` writable.
 */
enum SsdpStatus ssdp_solve(const struct SsdpProblem *p,
                           const struct SsdpConfig *config,
                           struct SsdpReport **out);

/**
 * # Safety
 * `r` must be null or a live report handle.
 */
void ssdp_report_free(struct SsdpReport *r);

/**
 * # Safety
 * `r` must be a live report handle; `out` must be writable.
 */
enum SsdpStatus ssdp_report_status(const struct SsdpReport *r, enum SsdpSolveStatus *out);

/**
 * Main iterations, primal objective `C • X`, dual objective `bᵀy` and the final gap.
 *
 * # Safety
 * `r` must be a live report handle; every output pointer must be writable.
 */
enum SsdpStatus ssdp_report_summary(const struct SsdpReport *r,
                                    size_t *iterations,
                                    double *primal,
                                    double *dual,
                                    double *gap);

/**
 * Copies the duality gap after each iteration (index 0 is the start) into `buf`.
 * `len` receives the number of entries; if `cap` is smaller nothing is copied and
 * `BufferTooSmall` is returned.
 *
 * # Safety
 * `r` must be a live report handle; `buf` must have room for `cap` doubles.
 */
enum SsdpStatus ssdp_report_gaps(const struct SsdpReport *r, double *buf, size_t cap, size_t *len);

/**
 * Relaxation, solve and `trials` rounds of hyperplane rounding.
 *
 * # Safety
 * `g` must be a live graph handle, `config` null or readable, `out` writable.
 */
enum SsdpStatus ssdp_maxcut(const struct SsdpGraph *g,
                            const struct SsdpConfig *config,
                            size_t trials,
                            uint64_t seed,
                            struct SsdpCut **out);

/**
 * # Safety
 * `c` must be null or a live cut handle.
 */
void ssdp_cut_free(struct SsdpCut *c);

/**
 * Best rounded cut value and the relaxation bound.
 *
 * # Safety
 * `c` must be a live cut handle; `value` and `bound` must be writable.
 */
enum SsdpStatus ssdp_cut_value(const struct SsdpCut *c, double *value, double *bound);

/**
 * Writes one 0/1 side label per vertex into `sides`, which must hold `n` bytes.
 *
 * # Safety
 * `c` must be a live cut handle; `sides` must have room for `n` bytes.
 */
enum SsdpStatus ssdp_cut_sides(const struct SsdpCut *c, uint8_t *sides, size_t n);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* SPARSE_SDP_H */
