#ifndef LLMOEA_H
#define LLMOEA_H

/* Generated by cbindgen from crates/ffi/src/lib.rs. Do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

typedef enum LlmoeaStatus {
  LLMOEA_STATUS_OK = 0,
  LLMOEA_STATUS_NULL_POINTER = 1,
  LLMOEA_STATUS_INVALID_UTF8 = 2,
  LLMOEA_STATUS_INVALID_ARGUMENT = 3,
  LLMOEA_STATUS_CONFIG = 4,
  LLMOEA_STATUS_UNKNOWN_PROBLEM = 5,
  LLMOEA_STATUS_PROVIDER = 6,
  LLMOEA_STATUS_IO = 7,
  LLMOEA_STATUS_EVALUATION = 8,
  LLMOEA_STATUS_OUT_OF_RANGE = 9,
  LLMOEA_STATUS_PANIC = 10,
} LlmoeaStatus;

/**
 * Run configuration.
 */
typedef struct LlmoeaConfig LlmoeaConfig;

/**
 * A benchmark problem that can be evaluated directly.
 */
typedef struct LlmoeaProblem LlmoeaProblem;

/**
 * Result of a finished run.
 */
typedef struct LlmoeaReport LlmoeaReport;

/**
 * One row of the per-generation series.
 */
typedef struct LlmoeaSeriesRow {
  size_t generation;
  size_t evaluations;
  double hv;
  double igd;
  /**
   * Gate score; `-inf` when no finite crowding distance exists.
   */
  double score;
  bool invoked;
  uint64_t tokens;
} LlmoeaSeriesRow;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * The message for the last failed call on this thread, or null after a
 * successful one. Free with [`llmoea_string_free`].
 */
char *llmoea_last_error(void);

/**
 * # Safety
 * `s` must be null or a string returned by this library.
 */
void llmoea_string_free(char *s);

/**
 * Library version as a static NUL-terminated string.
 */
const char *llmoea_version(void);

/**
 * A configuration with every field at its default.
 *
 * # Safety
 * `out` must be a valid pointer.
 */
enum LlmoeaStatus llmoea_config_new(struct LlmoeaConfig **out);

/**
 * Parses a TOML configuration; missing keys take their defaults.
 *
 * # Safety
 * `toml` must be a NUL-terminated string and `out` a valid pointer.
 */
enum LlmoeaStatus llmoea_config_from_toml(const char *toml, struct LlmoeaConfig **out);

/**
 * The configuration as TOML. Free with [`llmoea_string_free`].
 *
 * # Safety
 * `config` must be a live handle and `out` a valid pointer.
 */
enum LlmoeaStatus llmoea_config_to_toml(const struct LlmoeaConfig *config, char **out);

/**
 * # Safety
 * `config` must be a live handle and `name` a NUL-terminated string.
 */
enum LlmoeaStatus llmoea_config_set_problem(struct LlmoeaConfig *config,
                                            const char *name,
                                            size_t dim);

/**
 * `algorithm` is one of `nsga2`, `nsga2-llm`, `nsga2-llm-always`.
 *
 * # Safety
 * `config` must be a live handle and `algorithm` a NUL-terminated string.
 */
enum LlmoeaStatus llmoea_config_set_algorithm(struct LlmoeaConfig *config, const char *algorithm);

/**
 * # Safety
 * `config` must be a live handle.
 */
enum LlmoeaStatus llmoea_config_set_seed(struct LlmoeaConfig *config, uint64_t seed);

/**
 * Population size and evaluation budget.
 *
 * # Safety
 * `config` must be a live handle.
 */
enum LlmoeaStatus llmoea_config_set_budget(struct LlmoeaConfig *config,
                                           size_t pop_size,
                                           size_t max_evaluations);

/**
 * Gate threshold, elite count `l` and solutions per call `s`.
 *
 * # Safety
 * `config` must be a live handle.
 */
enum LlmoeaStatus llmoea_config_set_llm(struct LlmoeaConfig *config,
                                        double delta,
                                        size_t l,
                                        size_t s);

/**
 * # Safety
 * `config` must be null or a handle from this library, not used afterwards.
 */
void llmoea_config_free(struct LlmoeaConfig *config);

/**
 * Runs the optimizer to completion.
 *
 * # Safety
 * `config` must be a live handle and `out` a valid pointer.
 */
enum LlmoeaStatus llmoea_run(const struct LlmoeaConfig *config, struct LlmoeaReport **out);

/**
 * Final HV and IGD, total tokens and gate firings.
 *
 * # Safety
 * `report` must be a live handle; each output pointer may be null.
 */
enum LlmoeaStatus llmoea_report_summary(const struct LlmoeaReport *report,
                                        double *hv,
                                        double *igd,
                                        uint64_t *tokens,
                                        size_t *invocations);

/**
 * Number of series rows (generation 0 included).
 *
 * # Safety
 * `report` must be a live handle and `out` a valid pointer.
 */
enum LlmoeaStatus llmoea_report_series_len(const struct LlmoeaReport *report, size_t *out);

/**
 * # Safety
 * `report` must be a live handle and `out` a valid pointer.
 */
enum LlmoeaStatus llmoea_report_series_row(const struct LlmoeaReport *report,
                                           size_t index,
                                           struct LlmoeaSeriesRow *out);

/**
 * Copies the final non-dominated objective vectors row-major into `buf`.
 * `rows` and `m` always receive the front size; when `buf` is null or
 * `cap < rows * m` nothing is copied and `LLMOEA_STATUS_OUT_OF_RANGE` is returned.
 *
 * # Safety
 * `report` must be a live handle, `rows` and `m` valid pointers and `buf`
 * null or writable for `cap` doubles.
 */
enum LlmoeaStatus llmoea_report_front(const struct LlmoeaReport *report,
                                      double *buf,
                                      size_t cap,
                                      size_t *rows,
                                      size_t *m);

/**
 * Writes the metrics, front and log files (and the HV plot if `svg`) into `dir`.
 *
 * # Safety
 * `report` must be a live handle and `dir` a NUL-terminated string.
 */
enum LlmoeaStatus llmoea_report_write(const struct LlmoeaReport *report, const char *dir, bool svg);

/**
 * # Safety
 * `report` must be null or a handle from this library, not used afterwards.
 */
void llmoea_report_free(struct LlmoeaReport *report);

/**
 * A benchmark problem; `dim == 0` picks the standard size.
 *
 * # Safety
 * `name` must be a NUL-terminated string and `out` a valid pointer.
 */
enum LlmoeaStatus llmoea_problem_new(const char *name, size_t dim, struct LlmoeaProblem **out);

/**
 * Decision dimension and objective count.
 *
 * # Safety
 * `problem` must be a live handle; `d` and `m` valid pointers.
 */
enum LlmoeaStatus llmoea_problem_shape(const struct LlmoeaProblem *problem, size_t *d, size_t *m);

/**
 * # Safety
 * `problem` must be a live handle; `lower` and `upper` writable for `d` doubles.
 */
enum LlmoeaStatus llmoea_problem_bounds(const struct LlmoeaProblem *problem,
                                        double *lower,
                                        double *upper,
                                        size_t d);

/**
 * Evaluates `x` (length `d`) into `f` (length `m`). `x` must lie within the bounds.
 *
 * # Safety
 * `problem` must be a live handle, `x` readable for `d` and `f` writable for `m` doubles.
 */
enum LlmoeaStatus llmoea_problem_evaluate(const struct LlmoeaProblem *problem,
                                          const double *x,
                                          size_t d,
                                          double *f,
                                          size_t m);

/**
 * # Safety
 * `problem` must be null or a handle from this library, not used afterwards.
 */
void llmoea_problem_free(struct LlmoeaProblem *problem);

/**
 * Normalized hypervolume of `n` points of dimension `m` (row-major), using
 * the frame `(f - ideal) / (nadir - ideal)` and reference point `ref_multiplier`
 * on every axis.
 *
 * # Safety
 * `points` must be readable for `n * m` doubles, `ideal` and `nadir` for `m`,
 * and `out` must be a valid pointer.
 */
enum LlmoeaStatus llmoea_hypervolume(const double *points,
                                     size_t n,
                                     size_t m,
                                     const double *ideal,
                                     const double *nadir,
                                     double ref_multiplier,
                                     double *out);

/**
 * Inverted generational distance of `n` points against `k` reference points,
 * both of dimension `m`, row-major.
 *
 * # Safety
 * `points` must be readable for `n * m` doubles, `pf` for `k * m`, and `out`
 * must be a valid pointer.
 */
enum LlmoeaStatus llmoea_igd(const double *points,
                             size_t n,
                             const double *pf,
                             size_t k,
                             size_t m,
                             double *out);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* LLMOEA_H */
