/* C interface of the pareto-select library: frontier extraction, single-solution selection, and per-user utopia calibration. */

#ifndef PARETO_SELECT_H
#define PARETO_SELECT_H

/* Generated from the Rust sources by cbindgen; do not edit by hand. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

/**
 * Objective orientation.
 */
typedef enum PsDirection {
  PS_DIRECTION_MINIMIZE = 0,
  PS_DIRECTION_MAXIMIZE = 1,
} PsDirection;

/**
 * Distance used inside the population-discount scores.
 */
typedef enum PsDistance {
  PS_DISTANCE_EUCLIDEAN = 0,
  PS_DISTANCE_MANHATTAN = 1,
  PS_DISTANCE_CHEBYSHEV = 2,
} PsDistance;

/**
 * Result of every fallible boundary call.
 */
typedef enum PsStatus {
  /**
   * The call succeeded.
   */
  PS_STATUS_OK = 0,
  /**
   * Malformed input: bad file, bad value, missing parameter.
   */
  PS_STATUS_INPUT_ERROR = 2,
  /**
   * Structurally sound input with no feasible answer (empty
   * frontier, degenerate calibration).
   */
  PS_STATUS_INFEASIBLE = 3,
  /**
   * A required pointer argument was NULL.
   */
  PS_STATUS_NULL_ARGUMENT = 4,
  /**
   * A string argument was not valid UTF-8.
   */
  PS_STATUS_UTF8_ERROR = 5,
  /**
   * An internal invariant failed; the library caught a panic.
   */
  PS_STATUS_INTERNAL = 6,
} PsStatus;

/**
 * Selection strategies, mirroring the CLI names.
 */
typedef enum PsStrategy {
  /**
   * `akp`: reflex-angle knee (two objectives only).
   */
  PS_STRATEGY_ANGLE_KNEE = 0,
  /**
   * `ukp`: win counts over sampled weight vectors.
   */
  PS_STRATEGY_UTILITY_KNEE = 1,
  /**
   * `hv`: dominated volume against a reference point.
   */
  PS_STRATEGY_HYPERVOLUME = 2,
  /**
   * `ed`: distance to a global utopia point.
   */
  PS_STRATEGY_DISTANCE_TO_UTOPIA = 3,
  /**
   * `wm`: signed weighted mean.
   */
  PS_STRATEGY_WEIGHTED_MEAN = 4,
  /**
   * `pdu`: log of summed squared sample distances to a global utopia.
   */
  PS_STRATEGY_POPULATION_DISCOUNT = 5,
  /**
   * `cpdu`: same, with one utopia point per sample.
   */
  PS_STRATEGY_CALIBRATED_POPULATION_DISCOUNT = 6,
} PsStrategy;

/**
 * Candidate solutions plus their objective schema.
 */
typedef struct PsCandidateSet PsCandidateSet;

/**
 * Frontier membership, ids ascending.
 */
typedef struct PsFrontier PsFrontier;

/**
 * Strategy parameters; create, fill with setters, pass to `ps_select`.
 */
typedef struct PsParams PsParams;

/**
 * Accumulates sample rows before freezing them into a population set.
 */
typedef struct PsPopulationBuilder PsPopulationBuilder;

/**
 * Per-sample objective values for each solution.
 */
typedef struct PsPopulationSet PsPopulationSet;

/**
 * Outcome of one strategy run over the frontier.
 */
typedef struct PsSelection PsSelection;

/**
 * Per-user utopia vectors derived from an interaction log.
 */
typedef struct PsUtopiaTable PsUtopiaTable;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Human-readable reason for the most recent non-`Ok` status on this
 * thread. Borrowed; valid until the next library call on the thread.
 */
const char *ps_last_error_message(void);

/**
 * Library version as a static string.
 */
const char *ps_version(void);

/**
 * Load a candidate set from a schema CSV and a solutions CSV.
 *
 * # Safety
 * `schema_path` and `solutions_path` are NUL-terminated strings;
 * `out` receives an owned handle to release with
 * `ps_candidate_set_free`.
 */
enum PsStatus ps_candidate_set_load(const char *schema_path,
                                    const char *solutions_path,
                                    struct PsCandidateSet **out);

/**
 * Build a candidate set in memory.
 *
 * `values` is row-major: solution `i`'s objectives occupy
 * `values[i*k .. (i+1)*k]` in schema order.
 *
 * # Safety
 * `names` points to `k` strings, `directions` to `k` entries, `ids`
 * to `n` strings, `values` to `n * k` doubles; `out` as in
 * `ps_candidate_set_load`.
 */
enum PsStatus ps_candidate_set_new(const char *const *names,
                                   const enum PsDirection *directions,
                                   size_t k,
                                   const char *const *ids,
                                   const double *values,
                                   size_t n,
                                   struct PsCandidateSet **out);

/**
 * Number of candidate solutions in the set.
 *
 * # Safety
 * `set` must be a live handle.
 */
size_t ps_candidate_set_len(const struct PsCandidateSet *set);

/**
 * Number of objectives in the set's schema.
 *
 * # Safety
 * `set` must be a live handle.
 */
size_t ps_candidate_set_objectives(const struct PsCandidateSet *set);

/**
 * # Safety
 * `set` must come from this library and not be freed twice.
 */
void ps_candidate_set_free(struct PsCandidateSet *set);

/**
 * Load per-sample values from a samples CSV; the set supplies the
 * expected objective columns.
 *
 * # Safety
 * `set` live handle; `path` NUL-terminated; `out` receives an owned
 * handle for `ps_population_set_free`.
 */
enum PsStatus ps_population_set_load(const struct PsCandidateSet *set,
                                     const char *path,
                                     struct PsPopulationSet **out);

/**
 * # Safety
 * `pops` must come from this library and not be freed twice.
 */
void ps_population_set_free(struct PsPopulationSet *pops);

/**
 * Start collecting sample rows; finish with
 * `ps_population_builder_finish`, abandon with
 * `ps_population_builder_free`.
 */
struct PsPopulationBuilder *ps_population_builder_new(void);

/**
 * Append one sample row for one solution.
 *
 * # Safety
 * `builder` live handle; strings NUL-terminated; `values` points to
 * `k` doubles.
 */
enum PsStatus ps_population_builder_add(struct PsPopulationBuilder *builder,
                                        const char *solution_id,
                                        const char *sample_id,
                                        const double *values,
                                        size_t k);

/**
 * Freeze the builder into a population set. The builder stays valid
 * (and unchanged) whether or not this succeeds.
 *
 * # Safety
 * `builder` live handle; `out` receives an owned handle for
 * `ps_population_set_free`.
 */
enum PsStatus ps_population_builder_finish(const struct PsPopulationBuilder *builder,
                                           struct PsPopulationSet **out);

/**
 * # Safety
 * `builder` must come from this library and not be freed twice.
 */
void ps_population_builder_free(struct PsPopulationBuilder *builder);

/**
 * Extract the non-dominated ids (ascending).
 *
 * # Safety
 * `set` live handle; `out` receives an owned handle for
 * `ps_frontier_free`.
 */
enum PsStatus ps_frontier_extract(const struct PsCandidateSet *set, struct PsFrontier **out);

/**
 * Number of frontier members.
 *
 * # Safety
 * `frontier` must be a live handle.
 */
size_t ps_frontier_len(const struct PsFrontier *frontier);

/**
 * Borrowed id of member `index`, or NULL when out of range.
 *
 * # Safety
 * `frontier` must be a live handle; the pointer dies with it.
 */
const char *ps_frontier_id(const struct PsFrontier *frontier, size_t index);

/**
 * # Safety
 * `frontier` must come from this library and not be freed twice.
 */
void ps_frontier_free(struct PsFrontier *frontier);

/**
 * Fresh parameters: no utopia/reference/weights, seed 42, 1000 weight
 * draws, Euclidean distance, no normalization.
 */
struct PsParams *ps_params_new(void);

/**
 * Set a global utopia point (replaces any per-sample rows).
 *
 * # Safety
 * `params` live handle; `values` points to `k` doubles.
 */
enum PsStatus ps_params_set_utopia(struct PsParams *params, const double *values, size_t k);

/**
 * Add or replace one per-sample utopia row (replaces any global
 * point once the first row lands).
 *
 * # Safety
 * `params` live handle; `sample_id` NUL-terminated; `values` points
 * to `k` doubles.
 */
enum PsStatus ps_params_set_utopia_row(struct PsParams *params,
                                       const char *sample_id,
                                       const double *values,
                                       size_t k);

/**
 * Set the hypervolume reference point.
 *
 * # Safety
 * `params` live handle; `values` points to `k` doubles.
 */
enum PsStatus ps_params_set_reference(struct PsParams *params, const double *values, size_t k);

/**
 * Set the weighted-mean weights (schema order, all positive).
 *
 * # Safety
 * `params` live handle; `values` points to `k` doubles.
 */
enum PsStatus ps_params_set_weights(struct PsParams *params, const double *values, size_t k);

/**
 * Seed for the weight-vector sampler.
 *
 * # Safety
 * `params` must be a live handle.
 */
enum PsStatus ps_params_set_seed(struct PsParams *params, uint64_t seed);

/**
 * Number of weight vectors drawn for win counting (must be > 0).
 *
 * # Safety
 * `params` must be a live handle.
 */
enum PsStatus ps_params_set_weight_samples(struct PsParams *params, uint64_t m);

/**
 * Distance used by the population-discount scores.
 *
 * # Safety
 * `params` must be a live handle.
 */
enum PsStatus ps_params_set_distance(struct PsParams *params, enum PsDistance distance);

/**
 * Min-max normalize values (and side points through the same
 * transform) before scoring; 0 disables, anything else enables.
 *
 * # Safety
 * `params` must be a live handle.
 */
enum PsStatus ps_params_set_normalize(struct PsParams *params, int enabled);

/**
 * # Safety
 * `params` must come from this library and not be freed twice.
 */
void ps_params_free(struct PsParams *params);

/**
 * Extract the frontier of `set` and run `strategy` over it.
 * `populations` may be NULL for strategies that ignore it; `params`
 * may be NULL to use the defaults.
 *
 * # Safety
 * All handles live; `out` receives an owned handle for
 * `ps_selection_free`.
 */
enum PsStatus ps_select(const struct PsCandidateSet *set,
                        enum PsStrategy strategy,
                        const struct PsPopulationSet *populations,
                        const struct PsParams *params,
                        struct PsSelection **out);

/**
 * Borrowed id of the chosen solution.
 *
 * # Safety
 * `selection` live handle; the pointer dies with it.
 */
const char *ps_selection_chosen_id(const struct PsSelection *selection);

/**
 * Number of scored frontier members.
 *
 * # Safety
 * `selection` must be a live handle.
 */
size_t ps_selection_len(const struct PsSelection *selection);

/**
 * Borrowed id of scored member `index` (ids ascending), or NULL when
 * out of range.
 *
 * # Safety
 * `selection` live handle; the pointer dies with it.
 */
const char *ps_selection_member_id(const struct PsSelection *selection, size_t index);

/**
 * Score of member `index`; writes through `out_score`.
 *
 * # Safety
 * `selection` live handle; `out_score` non-NULL.
 */
enum PsStatus ps_selection_member_score(const struct PsSelection *selection,
                                        size_t index,
                                        double *out_score);

/**
 * Number of solutions tied at the best score (1 means no tie).
 *
 * # Safety
 * `selection` must be a live handle.
 */
size_t ps_selection_tie_len(const struct PsSelection *selection);

/**
 * Borrowed id of tied solution `index`, or NULL when out of range.
 *
 * # Safety
 * `selection` live handle; the pointer dies with it.
 */
const char *ps_selection_tie_id(const struct PsSelection *selection, size_t index);

/**
 * # Safety
 * `selection` must come from this library and not be freed twice.
 */
void ps_selection_free(struct PsSelection *selection);

/**
 * Derive per-user utopia points from an interaction log CSV
 * (`user_id,item_id`). `anchor_size` <= 0 uses the default (mean
 * records per user); `alpha`/`beta` scale the mean/σ aggregation;
 * `accuracy_utopia` fills the first component of every row.
 *
 * # Safety
 * `path` NUL-terminated; `out` receives an owned handle for
 * `ps_utopia_table_free`.
 */
enum PsStatus ps_calibrate(const char *path,
                           double alpha,
                           double beta,
                           int64_t anchor_size,
                           double accuracy_utopia,
                           struct PsUtopiaTable **out);

/**
 * Number of users in the table.
 *
 * # Safety
 * `table` must be a live handle.
 */
size_t ps_utopia_table_len(const struct PsUtopiaTable *table);

/**
 * Borrowed user id of row `index` (user ids ascending), or NULL when
 * out of range.
 *
 * # Safety
 * `table` live handle; the pointer dies with it.
 */
const char *ps_utopia_table_user(const struct PsUtopiaTable *table, size_t index);

/**
 * Utopia vector of row `index`: first component through
 * `out_accuracy`, long-tail component through `out_aplt`.
 *
 * # Safety
 * `table` live handle; out pointers non-NULL.
 */
enum PsStatus ps_utopia_table_row(const struct PsUtopiaTable *table,
                                  size_t index,
                                  double *out_accuracy,
                                  double *out_aplt);

/**
 * Users whose long-tail component was clamped into [0, 1].
 *
 * # Safety
 * `table` must be a live handle.
 */
size_t ps_utopia_table_clamp_count(const struct PsUtopiaTable *table);

/**
 * Mean long-tail component over all users.
 *
 * # Safety
 * `table` must be a live handle.
 */
double ps_utopia_table_mean_aplt(const struct PsUtopiaTable *table);

/**
 * Anchor size the calibration actually used.
 *
 * # Safety
 * `table` must be a live handle.
 */
size_t ps_utopia_table_anchor_size(const struct PsUtopiaTable *table);

/**
 * # Safety
 * `table` must come from this library and not be freed twice.
 */
void ps_utopia_table_free(struct PsUtopiaTable *table);

#ifdef __cplusplus
} // extern "C"
#endif // __cplusplus

#endif /* PARETO_SELECT_H */
