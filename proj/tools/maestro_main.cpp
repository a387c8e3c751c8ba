// maestro command line: graph / orchestrate / simulate / verify.
// Talks to the engine exclusively through the C API in maestro.h.

#include <cstdint>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <memory>
#include <string>

#include <CLI11.hpp>

#include "maestro.h"

namespace {

struct StringGuard {
  char* text = nullptr;
  ~StringGuard() { maestro_string_free(text); }
};

[[noreturn]] void die(maestro_status status) {
  std::cerr << "maestro: " << maestro_status_name(status) << ": "
            << maestro_last_error() << "\n";
  std::exit(1);
}

void check(maestro_status status) {
  if (status != MAESTRO_OK) die(status);
}

void write_output(const std::string& path, const char* text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) {
    std::cerr << "maestro: cannot open '" << path << "' for writing\n";
    std::exit(1);
  }
  out << text;
}

using CatalogHandle = std::unique_ptr<maestro_catalog, decltype(&maestro_catalog_free)>;

CatalogHandle load_catalog(const std::string& path) {
  maestro_catalog* catalog = nullptr;
  check(maestro_catalog_load(path.c_str(), &catalog));
  return {catalog, &maestro_catalog_free};
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"graph-based orchestration of service-oriented control systems"};
  app.require_subcommand(1);

  std::string catalog_path, scenario_path, out_path, history_path;
  double alpha = 1.0, beta = 100.0;
  std::uint64_t seed = 0;
  bool seed_given = false, timings = false;
  std::uint32_t count = 1000;

  auto* graph_cmd = app.add_subcommand("graph", "build the service graph, write DOT, report the shortest path");
  graph_cmd->add_option("--catalog", catalog_path, "catalog file")->required();
  graph_cmd->add_option("--alpha", alpha, "computation weight");
  graph_cmd->add_option("--beta", beta, "inaccuracy weight");
  graph_cmd->add_option("--out", out_path, "DOT output path")->default_val("graph.dot");

  auto* orchestrate_cmd = app.add_subcommand("orchestrate", "select an architecture and print the report");
  orchestrate_cmd->add_option("--catalog", catalog_path, "catalog file")->required();
  orchestrate_cmd->add_option("--alpha", alpha, "computation weight");
  orchestrate_cmd->add_option("--beta", beta, "inaccuracy weight");

  auto* simulate_cmd = app.add_subcommand("simulate", "run a scenario against the three-tank plant");
  simulate_cmd->add_option("--catalog", catalog_path, "catalog file")->required();
  simulate_cmd->add_option("--scenario", scenario_path, "scenario file")->required();
  auto* sim_alpha = simulate_cmd->add_option("--alpha", alpha, "override scenario weights");
  auto* sim_beta = simulate_cmd->add_option("--beta", beta, "override scenario weights");
  simulate_cmd->add_option("--out", out_path, "trace CSV path")->default_val("trace.csv");
  simulate_cmd->add_option("--history", history_path, "architecture history path (default: stdout)");
  simulate_cmd->add_option("--seed", seed, "override scenario seed")
      ->each([&](const std::string&) { seed_given = true; });
  simulate_cmd->add_flag("--timings", timings, "record measured per-step timings (not reproducible)");

  auto* verify_cmd = app.add_subcommand("verify", "cross-check Dijkstra against exhaustive enumeration");
  verify_cmd->add_option("--count", count, "number of random catalogs");
  verify_cmd->add_option("--seed", seed, "random seed");

  CLI11_PARSE(app, argc, argv);

  if (graph_cmd->parsed()) {
    CatalogHandle catalog = load_catalog(catalog_path);
    maestro_graph* graph = nullptr;
    check(maestro_graph_build(catalog.get(), alpha, beta, &graph));
    std::unique_ptr<maestro_graph, decltype(&maestro_graph_free)> graph_guard(
        graph, &maestro_graph_free);
    StringGuard dot;
    check(maestro_graph_dot(graph, 1, &dot.text));
    write_output(out_path, dot.text);
    StringGuard report;
    check(maestro_graph_report(graph, &report.text));
    std::cout << report.text;
    return 0;
  }

  if (orchestrate_cmd->parsed()) {
    CatalogHandle catalog = load_catalog(catalog_path);
    maestro_orchestrator* orch = nullptr;
    check(maestro_orchestrator_create(catalog.get(), alpha, beta, &orch));
    std::unique_ptr<maestro_orchestrator, decltype(&maestro_orchestrator_free)>
        orch_guard(orch, &maestro_orchestrator_free);
    StringGuard report;
    check(maestro_orchestrator_report(orch, &report.text));
    std::cout << report.text;
    return 0;
  }

  if (simulate_cmd->parsed()) {
    CatalogHandle catalog = load_catalog(catalog_path);
    maestro_scenario* scenario = nullptr;
    check(maestro_scenario_load(scenario_path.c_str(), &scenario));
    std::unique_ptr<maestro_scenario, decltype(&maestro_scenario_free)>
        scenario_guard(scenario, &maestro_scenario_free);

    if (sim_alpha->count() != sim_beta->count()) {
      std::cerr << "maestro: --alpha and --beta must be given together\n";
      return 1;
    }
    maestro_sim_options options{};
    options.use_weights = sim_alpha->count() > 0 ? 1 : 0;
    options.alpha = alpha;
    options.beta = beta;
    options.use_seed = seed_given ? 1 : 0;
    options.seed = seed;
    options.with_timings = timings ? 1 : 0;

    maestro_simulation* sim = nullptr;
    check(maestro_simulate(catalog.get(), scenario, &options, &sim));
    std::unique_ptr<maestro_simulation, decltype(&maestro_simulation_free)>
        sim_guard(sim, &maestro_simulation_free);

    StringGuard trace;
    check(maestro_simulation_trace_csv(sim, &trace.text));
    write_output(out_path, trace.text);

    StringGuard history;
    check(maestro_simulation_history(sim, &history.text));
    if (!history_path.empty())
      write_output(history_path, history.text);
    else
      std::cout << history.text;
    return 0;
  }

  if (verify_cmd->parsed()) {
    StringGuard report;
    std::uint32_t mismatches = 0;
    check(maestro_verify_paths(count, seed == 0 ? 1 : seed, &report.text, &mismatches));
    std::cout << report.text << "\n";
    return mismatches == 0 ? 0 : 2;
  }

  return 1;
}
