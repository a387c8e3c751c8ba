#include "maestro.h"

#include <cstring>
#include <memory>
#include <new>
#include <string>

#include "maestro/catalog_io.hpp"
#include "maestro/format.hpp"
#include "maestro/orchestrator.hpp"
#include "maestro/plant_sim.hpp"
#include "maestro/verify.hpp"

using namespace maestro;

struct maestro_catalog {
  Catalog catalog;
};
struct maestro_graph {
  ServiceGraph graph;
};
struct maestro_orchestrator {
  Orchestrator orch;
};
struct maestro_scenario {
  SimScenario scenario;
};
struct maestro_simulation {
  SimResult result;
  bool with_timings = false;
};

namespace {

thread_local std::string g_last_error = "no error";

maestro_status status_of(ErrorCode code) {
  switch (code) {
    case ErrorCode::invalid_argument: return MAESTRO_ERR_INVALID_ARGUMENT;
    case ErrorCode::parse: return MAESTRO_ERR_PARSE;
    case ErrorCode::construction: return MAESTRO_ERR_CONSTRUCTION;
    case ErrorCode::no_path: return MAESTRO_ERR_NO_PATH;
    case ErrorCode::event: return MAESTRO_ERR_EVENT;
    case ErrorCode::io: return MAESTRO_ERR_IO;
    case ErrorCode::internal: return MAESTRO_ERR_INTERNAL;
  }
  return MAESTRO_ERR_INTERNAL;
}

maestro_status fail(maestro_status status, const std::string& message) {
  g_last_error = message;
  return status;
}

// Runs `body` translating C++ exceptions into status codes.
template <typename Fn>
maestro_status guarded(Fn&& body) {
  try {
    return body();
  } catch (const Error& e) {
    return fail(status_of(e.code()), e.what());
  } catch (const std::bad_alloc&) {
    return fail(MAESTRO_ERR_INTERNAL, "out of memory");
  } catch (const std::exception& e) {
    return fail(MAESTRO_ERR_INTERNAL, e.what());
  }
}

char* copy_string(const std::string& s) {
  char* out = new char[s.size() + 1];
  std::memcpy(out, s.c_str(), s.size() + 1);
  return out;
}

maestro_status require(bool condition, const char* message) {
  if (condition) return MAESTRO_OK;
  return fail(MAESTRO_ERR_INVALID_ARGUMENT, message);
}

}  // namespace

extern "C" {

const char* maestro_last_error(void) { return g_last_error.c_str(); }

const char* maestro_status_name(maestro_status status) {
  switch (status) {
    case MAESTRO_OK: return "ok";
    case MAESTRO_ERR_INVALID_ARGUMENT: return "invalid argument";
    case MAESTRO_ERR_PARSE: return "parse error";
    case MAESTRO_ERR_CONSTRUCTION: return "construction error";
    case MAESTRO_ERR_NO_PATH: return "no path";
    case MAESTRO_ERR_EVENT: return "event error";
    case MAESTRO_ERR_IO: return "io error";
    case MAESTRO_ERR_INTERNAL: return "internal error";
  }
  return "unknown status";
}

void maestro_string_free(char* text) { delete[] text; }

/* ---- catalogs ---------------------------------------------------------- */

maestro_status maestro_catalog_parse(const char* text, maestro_catalog** out) {
  if (auto s = require(text && out, "maestro_catalog_parse: NULL argument")) return s;
  return guarded([&] {
    auto* handle = new maestro_catalog{parse_catalog(text)};
    *out = handle;
    return MAESTRO_OK;
  });
}

maestro_status maestro_catalog_load(const char* path, maestro_catalog** out) {
  if (auto s = require(path && out, "maestro_catalog_load: NULL argument")) return s;
  return guarded([&] {
    auto* handle = new maestro_catalog{parse_catalog(read_file(path))};
    *out = handle;
    return MAESTRO_OK;
  });
}

maestro_status maestro_catalog_serialize(const maestro_catalog* catalog,
                                         char** out_text) {
  if (auto s = require(catalog && out_text, "maestro_catalog_serialize: NULL argument"))
    return s;
  return guarded([&] {
    *out_text = copy_string(serialize_catalog(catalog->catalog));
    return MAESTRO_OK;
  });
}

size_t maestro_catalog_size(const maestro_catalog* catalog) {
  return catalog ? catalog->catalog.size() : 0;
}

void maestro_catalog_free(maestro_catalog* catalog) { delete catalog; }

/* ---- service graphs ----------------------------------------------------- */

maestro_status maestro_graph_build(const maestro_catalog* catalog, double alpha,
                                   double beta, maestro_graph** out) {
  if (auto s = require(catalog && out, "maestro_graph_build: NULL argument")) return s;
  return guarded([&] {
    auto* handle = new maestro_graph{
        create_service_graph(catalog->catalog, CostWeights{alpha, beta})};
    *out = handle;
    return MAESTRO_OK;
  });
}

size_t maestro_graph_node_count(const maestro_graph* graph) {
  return graph ? graph->graph.nodes().size() : 0;
}

size_t maestro_graph_edge_count(const maestro_graph* graph) {
  return graph ? graph->graph.edges().size() : 0;
}

maestro_status maestro_graph_dot(const maestro_graph* graph, int highlight_optimal,
                                 char** out_text) {
  if (auto s = require(graph && out_text, "maestro_graph_dot: NULL argument")) return s;
  return guarded([&] {
    std::vector<std::string> highlight;
    if (highlight_optimal)
      highlight = dijkstra(graph->graph, ServiceGraph::kStartId,
                           ServiceGraph::kTargetId)
                      .nodes;
    *out_text = copy_string(export_dot(graph->graph, highlight));
    return MAESTRO_OK;
  });
}

maestro_status maestro_graph_solve(const maestro_graph* graph, char** out_path,
                                   double* out_total_cost) {
  if (auto s = require(graph != nullptr, "maestro_graph_solve: NULL graph")) return s;
  return guarded([&] {
    PathResult path =
        dijkstra(graph->graph, ServiceGraph::kStartId, ServiceGraph::kTargetId);
    if (out_path) *out_path = copy_string(join(path.nodes, " -> "));
    if (out_total_cost) *out_total_cost = path.total_cost;
    return MAESTRO_OK;
  });
}

maestro_status maestro_graph_report(const maestro_graph* graph, char** out_text) {
  if (auto s = require(graph && out_text, "maestro_graph_report: NULL argument"))
    return s;
  return guarded([&] {
    const ServiceGraph& g = graph->graph;
    std::string out = "nodes:\n";
    for (const auto& n : g.nodes())
      out += "  " + n.id + " [" + to_string(n.kind) + "] cost " +
             format_number(n.node_cost) + "\n";
    PathResult path = dijkstra(g, ServiceGraph::kStartId, ServiceGraph::kTargetId);
    out += "path: " + join(path.nodes, " -> ") + "\n";
    out += "total cost: " + format_number(path.total_cost) + "\n";
    *out_text = copy_string(out);
    return MAESTRO_OK;
  });
}

void maestro_graph_free(maestro_graph* graph) { delete graph; }

/* ---- orchestrator -------------------------------------------------------- */

maestro_status maestro_orchestrator_create(const maestro_catalog* catalog,
                                           double alpha, double beta,
                                           maestro_orchestrator** out) {
  if (auto s = require(catalog && out, "maestro_orchestrator_create: NULL argument"))
    return s;
  return guarded([&] {
    std::unique_ptr<maestro_orchestrator> handle(new maestro_orchestrator{
        Orchestrator(catalog->catalog, CostWeights{alpha, beta})});
    handle->orch.initialize();
    *out = handle.release();
    return MAESTRO_OK;
  });
}

namespace {

maestro_status apply_event(maestro_orchestrator* orch, const OrchestrationEvent& event,
                           int* out_changed) {
  return guarded([&] {
    EventOutcome outcome = orch->orch.handle_event(event);
    if (out_changed) *out_changed = outcome.architecture.has_value() ? 1 : 0;
    if (outcome.stale) g_last_error = outcome.message;
    return MAESTRO_OK;
  });
}

ServiceDescriptor parse_single_service(const char* text) {
  Catalog parsed = parse_catalog(text);
  if (parsed.size() != 1)
    throw ContractError("expected exactly one [service <id>] section");
  return parsed.services().front();
}

}  // namespace

maestro_status maestro_orchestrator_add_service(maestro_orchestrator* orch,
                                                const char* service_text,
                                                int* out_changed) {
  if (auto s = require(orch && service_text,
                       "maestro_orchestrator_add_service: NULL argument"))
    return s;
  return guarded([&] {
    return apply_event(orch, ServiceAdded{parse_single_service(service_text)},
                       out_changed);
  });
}

maestro_status maestro_orchestrator_update_service(maestro_orchestrator* orch,
                                                   const char* service_text,
                                                   int* out_changed) {
  if (auto s = require(orch && service_text,
                       "maestro_orchestrator_update_service: NULL argument"))
    return s;
  return guarded([&] {
    return apply_event(orch, ServiceUpdated{parse_single_service(service_text)},
                       out_changed);
  });
}

maestro_status maestro_orchestrator_remove_service(maestro_orchestrator* orch,
                                                   const char* service_id,
                                                   int* out_changed) {
  if (auto s = require(orch && service_id,
                       "maestro_orchestrator_remove_service: NULL argument"))
    return s;
  return apply_event(orch, ServiceRemoved{service_id}, out_changed);
}

maestro_status maestro_orchestrator_set_weights(maestro_orchestrator* orch,
                                                double alpha, double beta,
                                                int* out_changed) {
  if (auto s = require(orch != nullptr, "maestro_orchestrator_set_weights: NULL orchestrator"))
    return s;
  return apply_event(orch, WeightsChanged{CostWeights{alpha, beta}}, out_changed);
}

uint64_t maestro_orchestrator_epoch(const maestro_orchestrator* orch) {
  return orch ? orch->orch.epoch() : 0;
}

int maestro_orchestrator_stale(const maestro_orchestrator* orch) {
  return orch && orch->orch.stale() ? 1 : 0;
}

maestro_status maestro_orchestrator_report(const maestro_orchestrator* orch,
                                           char** out_text) {
  if (auto s = require(orch && out_text, "maestro_orchestrator_report: NULL argument"))
    return s;
  return guarded([&] {
    *out_text = copy_string(orch->orch.report());
    return MAESTRO_OK;
  });
}

void maestro_orchestrator_free(maestro_orchestrator* orch) { delete orch; }

/* ---- simulation ---------------------------------------------------------- */

maestro_status maestro_scenario_parse(const char* text, maestro_scenario** out) {
  if (auto s = require(text && out, "maestro_scenario_parse: NULL argument")) return s;
  return guarded([&] {
    *out = new maestro_scenario{parse_scenario(text)};
    return MAESTRO_OK;
  });
}

maestro_status maestro_scenario_load(const char* path, maestro_scenario** out) {
  if (auto s = require(path && out, "maestro_scenario_load: NULL argument")) return s;
  return guarded([&] {
    *out = new maestro_scenario{parse_scenario(read_file(path))};
    return MAESTRO_OK;
  });
}

void maestro_scenario_free(maestro_scenario* scenario) { delete scenario; }

maestro_status maestro_simulate(const maestro_catalog* catalog,
                                const maestro_scenario* scenario,
                                const maestro_sim_options* options,
                                maestro_simulation** out) {
  if (auto s = require(catalog && scenario && out, "maestro_simulate: NULL argument"))
    return s;
  return guarded([&] {
    SimScenario run = scenario->scenario;
    CostWeights weights;
    if (options && options->use_weights) {
      weights = CostWeights{options->alpha, options->beta};
    } else if (run.weights) {
      weights = *run.weights;
    } else {
      return fail(MAESTRO_ERR_INVALID_ARGUMENT,
                  "maestro_simulate: no weights in the scenario; pass them in options");
    }
    if (options && options->use_seed) run.seed = options->seed;
    auto handle = std::make_unique<maestro_simulation>();
    handle->with_timings = options && options->with_timings;
    handle->result = run_scenario(run, catalog->catalog, weights);
    *out = handle.release();
    return MAESTRO_OK;
  });
}

maestro_status maestro_simulation_trace_csv(const maestro_simulation* sim,
                                            char** out_text) {
  if (auto s = require(sim && out_text, "maestro_simulation_trace_csv: NULL argument"))
    return s;
  return guarded([&] {
    *out_text = copy_string(trace_to_csv(sim->result.trace, sim->with_timings));
    return MAESTRO_OK;
  });
}

maestro_status maestro_simulation_history(const maestro_simulation* sim,
                                          char** out_text) {
  if (auto s = require(sim && out_text, "maestro_simulation_history: NULL argument"))
    return s;
  return guarded([&] {
    *out_text = copy_string(history_to_text(sim->result.history));
    return MAESTRO_OK;
  });
}

size_t maestro_simulation_epoch_count(const maestro_simulation* sim) {
  if (!sim) return 0;
  size_t epochs = 0;
  for (const auto& h : sim->result.history)
    if (!h.stale && h.note.empty()) ++epochs;
  return epochs;
}

size_t maestro_simulation_step_count(const maestro_simulation* sim) {
  return sim ? sim->result.trace.size() : 0;
}

void maestro_simulation_free(maestro_simulation* sim) { delete sim; }

/* ---- verification --------------------------------------------------------- */

maestro_status maestro_verify_paths(uint32_t count, uint64_t seed,
                                    char** out_report, uint32_t* out_mismatches) {
  return guarded([&] {
    VerifyReport report = run_path_verification({count, seed});
    if (out_report) *out_report = copy_string(report.summary());
    if (out_mismatches) *out_mismatches = report.mismatches;
    return MAESTRO_OK;
  });
}

} /* extern "C" */
