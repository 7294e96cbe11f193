/* C interface to the pansched scheduling library.
 *
 * Every constructor hands back an opaque handle through an out-parameter and
 * returns a status code; on any status other than PS_OK the out-parameter is
 * untouched and ps_last_error() describes the failure for the calling thread.
 * Handles are freed with the matching *_free function; NULL is accepted and
 * ignored there. Handles are not thread-safe individually, but independent
 * handles may be used from different threads.
 */
#ifndef PANSCHED_H
#define PANSCHED_H

#include <stddef.h>
#include <stdint.h>

#ifdef __cplusplus
extern "C" {
#endif

typedef enum ps_status {
  PS_OK = 0,
  PS_ERR_INVALID_ARGUMENT = 1,
  PS_ERR_PARSE = 2,
  PS_ERR_IO = 3,
  PS_ERR_INFEASIBLE = 4,
  PS_ERR_BUDGET = 5,
  PS_ERR_UNKNOWN = 6
} ps_status;

/* Message for the most recent failing call on this thread ("" if none). The
 * pointer stays valid until the next failing call on the same thread. */
const char* ps_last_error(void);

const char* ps_version(void);

/* ---- contact graphs ---------------------------------------------------- */

typedef struct ps_graph ps_graph;

/* Edge-list CSV "i,j,p". n = 0 sizes the graph from the data. A sidecar
 * <path>.meta.json written by ps_graph_save is picked up automatically. */
ps_status ps_graph_load_edge_list(const char* path, size_t n, ps_graph** out);

/* Interaction log "timestamp id_a id_b" aggregated over observation_days. */
ps_status ps_graph_from_interaction_log(const char* path, size_t observation_days, ps_graph** out);

/* profile is "sparse" or "dense"; n must be at least 2. */
ps_status ps_graph_random(size_t n, const char* profile, uint64_t seed, ps_graph** out);

/* Seeded 20-employee two-section base-case graph. */
ps_status ps_graph_base20(uint64_t seed, ps_graph** out);

/* Marks round(fraction * n) employees as vaccinated, selection seeded. */
ps_status ps_graph_assign_vaccination(ps_graph* graph, double fraction, uint64_t seed);

/* Writes the edge list plus a .meta.json sidecar (n, vaccination flags,
 * provenance when the graph came from a generator or an interaction log). */
ps_status ps_graph_save(const ps_graph* graph, const char* path);

size_t ps_graph_employees(const ps_graph* graph);
size_t ps_graph_edges(const ps_graph* graph);
/* Contact probability, or NaN when an index is out of range. */
double ps_graph_contact(const ps_graph* graph, size_t i, size_t j);
/* 1 = vaccinated, 0 = not, -1 = index out of range. */
int ps_graph_vaccinated(const ps_graph* graph, size_t i);
/* 1 and *out set when employee i came from an interaction log with an
 * external id; 0 otherwise. */
int ps_graph_external_id(const ps_graph* graph, size_t i, int64_t* out);

void ps_graph_free(ps_graph* graph);

/* ---- single scenarios -------------------------------------------------- */

typedef struct ps_scenario ps_scenario;
typedef struct ps_result ps_result;

ps_status ps_scenario_load(const char* path, ps_scenario** out);
ps_status ps_scenario_load_string(const char* text, ps_scenario** out);

ps_status ps_scenario_set_seed(ps_scenario* scenario, uint64_t seed);
ps_status ps_scenario_set_repetitions(ps_scenario* scenario, size_t repetitions);
/* mode: "exact" or "linearized". */
ps_status ps_scenario_set_mode(ps_scenario* scenario, const char* mode);
/* strategy: "R", "M2" or "M1". */
ps_status ps_scenario_set_strategy(ps_scenario* scenario, const char* strategy);

/* Runs the configured strategy for the configured repetition count. */
ps_status ps_scenario_run(const ps_scenario* scenario, ps_result** out);

/* Exhaustive optimum for the scenario's model (strategy must be M1 or M2).
 * max_states = 0 uses the default enumeration budget; the call refuses with
 * PS_ERR_BUDGET when the instance is estimated to exceed the budget. */
ps_status ps_scenario_run_oracle(const ps_scenario* scenario, uint64_t max_states, ps_result** out);

void ps_scenario_free(ps_scenario* scenario);

/* ---- results ----------------------------------------------------------- */

double ps_result_mean_risk(const ps_result* result);
/* 1 when every repetition produced a feasible solution. */
int ps_result_feasible(const ps_result* result);
size_t ps_result_repetitions(const ps_result* result);
/* Risk of one repetition, or NaN when rep is out of range. */
double ps_result_risk(const ps_result* result, size_t rep);

/* Best schedule found (the oracle's optimum for oracle results). */
size_t ps_result_employees(const ps_result* result);
size_t ps_result_days(const ps_result* result);
/* 1/0, or -1 when an index is out of range. */
int ps_result_present(const ps_result* result, size_t employee, size_t day);
int ps_result_has_tests(const ps_result* result);
int ps_result_tested(const ps_result* result, size_t employee, size_t day);
/* Day-column expansions performed by the oracle; 0 for GA results. */
uint64_t ps_result_states_visited(const ps_result* result);

/* Serializes the result as JSON to path, or to stdout when path is NULL. */
ps_status ps_result_write_json(const ps_result* result, const char* path);

void ps_result_free(ps_result* result);

/* ---- scenario grids ---------------------------------------------------- */

typedef struct ps_grid ps_grid;
typedef struct ps_table ps_table;

ps_status ps_grid_load(const char* path, ps_grid** out);
ps_status ps_grid_load_string(const char* text, ps_grid** out);

/* Overrides applied to every cell on top of the grid's base config. */
ps_status ps_grid_set_seed(ps_grid* grid, uint64_t seed);
ps_status ps_grid_set_repetitions(ps_grid* grid, size_t repetitions);
ps_status ps_grid_set_mode(ps_grid* grid, const char* mode);

/* Runs all (cell, strategy, repetition) jobs on a worker pool. threads = 0
 * uses the hardware concurrency. Per-cell failures are recorded in the table
 * rather than failing the whole grid. */
ps_status ps_grid_run(const ps_grid* grid, size_t threads, ps_table** out);

void ps_grid_free(ps_grid* grid);

size_t ps_table_rows(const ps_table* table);
/* 1 when the row completed, 0 when its error column is set or row is out of
 * range. */
int ps_table_row_ok(const ps_table* table, size_t row);

/* format: "csv" or "markdown". path NULL writes to stdout. */
ps_status ps_table_write(const ps_table* table, const char* format, const char* path);

void ps_table_free(ps_table* table);

#ifdef __cplusplus
}
#endif

#endif /* PANSCHED_H */
