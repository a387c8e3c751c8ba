/*
 * maestro C API: graph-based orchestration of service-oriented control
 * systems behind opaque handles and status codes.
 *
 * Every function returning maestro_status sets a thread-local error message
 * readable through maestro_last_error() on failure. Strings returned through
 * char** out-parameters are heap-allocated; release them with
 * maestro_string_free().
 */
#ifndef MAESTRO_H
#define MAESTRO_H

#include <stddef.h>
#include <stdint.h>

#ifdef __cplusplus
extern "C" {
#endif

typedef enum maestro_status {
  MAESTRO_OK = 0,
  MAESTRO_ERR_INVALID_ARGUMENT = 1,
  MAESTRO_ERR_PARSE = 2,
  MAESTRO_ERR_CONSTRUCTION = 3,
  MAESTRO_ERR_NO_PATH = 4,
  MAESTRO_ERR_EVENT = 5,
  MAESTRO_ERR_IO = 6,
  MAESTRO_ERR_INTERNAL = 7
} maestro_status;

/* Message for the most recent failure on this thread; never NULL. */
const char* maestro_last_error(void);
const char* maestro_status_name(maestro_status status);
void maestro_string_free(char* text);

/* ---- catalogs ---------------------------------------------------------- */

typedef struct maestro_catalog maestro_catalog;

maestro_status maestro_catalog_parse(const char* text, maestro_catalog** out);
maestro_status maestro_catalog_load(const char* path, maestro_catalog** out);
maestro_status maestro_catalog_serialize(const maestro_catalog* catalog,
                                         char** out_text);
size_t maestro_catalog_size(const maestro_catalog* catalog);
void maestro_catalog_free(maestro_catalog* catalog);

/* ---- service graphs ----------------------------------------------------- */

typedef struct maestro_graph maestro_graph;

maestro_status maestro_graph_build(const maestro_catalog* catalog, double alpha,
                                   double beta, maestro_graph** out);
size_t maestro_graph_node_count(const maestro_graph* graph);
size_t maestro_graph_edge_count(const maestro_graph* graph);

/* DOT text; when highlight_optimal is nonzero the start->target shortest
 * path is marked. Fails with MAESTRO_ERR_NO_PATH if none exists. */
maestro_status maestro_graph_dot(const maestro_graph* graph, int highlight_optimal,
                                 char** out_text);

/* Shortest path as "start -> ... -> target" plus its total cost. */
maestro_status maestro_graph_solve(const maestro_graph* graph, char** out_path,
                                   double* out_total_cost);

/* Per-node cost table, selected path and total, as stable text. */
maestro_status maestro_graph_report(const maestro_graph* graph, char** out_text);

void maestro_graph_free(maestro_graph* graph);

/* ---- orchestrator -------------------------------------------------------- */

typedef struct maestro_orchestrator maestro_orchestrator;

/* Creates the orchestration state and performs the initial selection
 * (epoch 1). Fails when the catalog cannot produce an architecture. */
maestro_status maestro_orchestrator_create(const maestro_catalog* catalog,
                                           double alpha, double beta,
                                           maestro_orchestrator** out);

/* Event entry points. `service_text` is a single [service <id>] section in
 * catalog syntax. On success *out_changed (may be NULL) is 1 when a new
 * architecture was selected. A failing re-orchestration returns MAESTRO_OK
 * with the previous architecture kept and marked stale. */
maestro_status maestro_orchestrator_add_service(maestro_orchestrator* orch,
                                                const char* service_text,
                                                int* out_changed);
maestro_status maestro_orchestrator_update_service(maestro_orchestrator* orch,
                                                   const char* service_text,
                                                   int* out_changed);
maestro_status maestro_orchestrator_remove_service(maestro_orchestrator* orch,
                                                   const char* service_id,
                                                   int* out_changed);
maestro_status maestro_orchestrator_set_weights(maestro_orchestrator* orch,
                                                double alpha, double beta,
                                                int* out_changed);

uint64_t maestro_orchestrator_epoch(const maestro_orchestrator* orch);
int maestro_orchestrator_stale(const maestro_orchestrator* orch);

/* Architecture report: epoch, node sequence, per-node cost, total cost and
 * the wiring list. */
maestro_status maestro_orchestrator_report(const maestro_orchestrator* orch,
                                           char** out_text);

void maestro_orchestrator_free(maestro_orchestrator* orch);

/* ---- simulation ---------------------------------------------------------- */

typedef struct maestro_scenario maestro_scenario;
typedef struct maestro_simulation maestro_simulation;

maestro_status maestro_scenario_parse(const char* text, maestro_scenario** out);
maestro_status maestro_scenario_load(const char* path, maestro_scenario** out);
void maestro_scenario_free(maestro_scenario* scenario);

typedef struct maestro_sim_options {
  /* When nonzero, alpha/beta override any weights in the scenario prologue. */
  int use_weights;
  double alpha;
  double beta;
  /* When nonzero, seed overrides the scenario seed. */
  int use_seed;
  uint64_t seed;
  /* When nonzero the trace carries measured per-step timings (wall clock,
   * not reproducible); otherwise the step_us column is written as 0. */
  int with_timings;
} maestro_sim_options;

/* Runs the closed loop; options may be NULL for scenario defaults. Scenarios
 * without prologue weights require use_weights. */
maestro_status maestro_simulate(const maestro_catalog* catalog,
                                const maestro_scenario* scenario,
                                const maestro_sim_options* options,
                                maestro_simulation** out);

maestro_status maestro_simulation_trace_csv(const maestro_simulation* sim,
                                            char** out_text);
maestro_status maestro_simulation_history(const maestro_simulation* sim,
                                          char** out_text);
size_t maestro_simulation_epoch_count(const maestro_simulation* sim);
size_t maestro_simulation_step_count(const maestro_simulation* sim);
void maestro_simulation_free(maestro_simulation* sim);

/* ---- verification --------------------------------------------------------- */

/* Cross-checks Dijkstra against exhaustive path enumeration over `count`
 * seeded random catalogs. Returns MAESTRO_OK with a report either way;
 * *out_mismatches (may be NULL) carries the number of disagreements. */
maestro_status maestro_verify_paths(uint32_t count, uint64_t seed,
                                    char** out_report, uint32_t* out_mismatches);

#ifdef __cplusplus
} /* extern "C" */
#endif

#endif /* MAESTRO_H */
