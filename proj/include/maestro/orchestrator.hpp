#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "maestro/shortest_path.hpp"

namespace maestro {

struct ServiceAdded {
  ServiceDescriptor service;
};
struct ServiceRemoved {
  std::string id;
};
struct ServiceUpdated {
  ServiceDescriptor service;
};
struct WeightsChanged {
  CostWeights weights;
};

// Any of these triggers a full graph rebuild and re-selection.
using OrchestrationEvent =
    std::variant<ServiceAdded, ServiceRemoved, ServiceUpdated, WeightsChanged>;

// One provider-guarantee -> consumer-requirement connection. The provider
// id "reference" denotes the configured reference source (not a service).
struct Connection {
  std::string provider;
  std::string consumer;
  Functionality functionality = Functionality::measured_output;

  bool operator==(const Connection&) const = default;
};

inline constexpr const char* kReferenceProvider = "reference";

struct Architecture {
  PathResult path;
  std::vector<double> node_costs;  // aligned with path.nodes
  std::vector<Connection> wiring;
  std::uint64_t epoch = 0;
};

// Dataflow connections realizing the selected path: sensor tau_y -> filter,
// filter tau_x -> controller, controller tau_u -> actuator, plus the
// controller -> filter tau_u feedback and model -> grouped-service tau_model
// links that the graph deliberately omits, and the configured tau_ref source.
// Throws ContractError when some requirement has no compatible provider.
std::vector<Connection> wiring_plan(const ServiceGraph& g, const PathResult& path,
                                    const Catalog& catalog);

// One-shot selection: build the graph, run Dijkstra start->target, derive the
// wiring. Throws GraphError / NoPathError on failure.
Architecture orchestrate(const Catalog& catalog, const CostWeights& weights,
                         std::uint64_t epoch = 1);

struct EventOutcome {
  // Present exactly when the selected node sequence changed (epoch bumped).
  std::optional<Architecture> architecture;
  bool stale = false;  // last re-orchestration failed; previous selection kept
  std::string message;
};

// Serialized event-driven re-orchestration state (Algorithm "rebuild per
// trigger": no incremental graph patching).
class Orchestrator {
 public:
  Orchestrator(Catalog catalog, CostWeights weights);

  // First selection; epoch 1. Throws on failure (nothing to retain yet).
  const Architecture& initialize();

  // Applies one event. Invalid events (unknown/duplicate id, bad weights)
  // throw EventError and leave all state untouched. A failing
  // re-orchestration keeps the previous architecture and flags it stale.
  EventOutcome handle_event(const OrchestrationEvent& event);

  const Catalog& catalog() const { return catalog_; }
  const CostWeights& weights() const { return weights_; }
  const std::optional<Architecture>& current() const { return current_; }
  std::uint64_t epoch() const { return epoch_; }
  bool stale() const { return stale_; }

  // Architecture report: epoch, node sequence, per-node cost, total cost and
  // the wiring list, as stable text.
  std::string report() const;

 private:
  Catalog catalog_;
  CostWeights weights_;
  std::optional<Architecture> current_;
  std::uint64_t epoch_ = 0;
  bool stale_ = false;
};

}  // namespace maestro
