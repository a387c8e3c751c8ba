#include "maestro/orchestrator.hpp"

#include <algorithm>

#include "maestro/format.hpp"

namespace maestro {

namespace {

const GraphNode& path_node(const ServiceGraph& g, const std::string& id) {
  const GraphNode* n = g.find_node(id);
  if (!n) throw ContractError("wiring_plan: node '" + id + "' is not in the graph");
  return *n;
}

const ServiceDescriptor& descriptor(const Catalog& catalog, const std::string& id) {
  const ServiceDescriptor* s = catalog.find(id);
  if (!s) throw ContractError("wiring_plan: service '" + id + "' is not in the catalog");
  return *s;
}

bool guarantees(const ServiceDescriptor& s, Functionality f) {
  return std::any_of(s.ports.begin(), s.ports.end(), [&](const Port& p) {
    return p.direction == PortDirection::guarantee && p.functionality == f;
  });
}

}  // namespace

std::vector<Connection> wiring_plan(const ServiceGraph& g, const PathResult& path,
                                    const Catalog& catalog) {
  const GraphNode* sensor = nullptr;
  const GraphNode* filter = nullptr;
  const GraphNode* controller = nullptr;
  for (const auto& id : path.nodes) {
    const GraphNode& n = path_node(g, id);
    switch (n.kind) {
      case NodeKind::sensor: sensor = &n; break;
      case NodeKind::filter: filter = &n; break;
      case NodeKind::controller: controller = &n; break;
      default: break;
    }
  }

  // Provider lookup by functionality for the selected loop; tau_model is
  // resolved per consumer (each grouped node uses its own model), tau_ref
  // comes from configuration.
  auto provider_for = [&](const GraphNode& consumer,
                          Functionality f) -> std::optional<Connection> {
    const GraphNode* source = nullptr;
    switch (f) {
      case Functionality::measured_output: source = sensor; break;
      case Functionality::state_estimate: source = filter; break;
      case Functionality::control_input: source = controller; break;
      case Functionality::model: {
        if (!consumer.model_service) return std::nullopt;
        const ServiceDescriptor& m = descriptor(catalog, *consumer.model_service);
        if (!guarantees(m, Functionality::model)) return std::nullopt;
        return Connection{m.id, consumer.id, f};
      }
      case Functionality::reference:
        return Connection{kReferenceProvider, consumer.id, f};
    }
    if (!source || !source->base_service) return std::nullopt;
    if (!guarantees(descriptor(catalog, *source->base_service), f))
      return std::nullopt;
    return Connection{source->id, consumer.id, f};
  };

  std::vector<Connection> wiring;
  for (const auto& id : path.nodes) {
    const GraphNode& n = path_node(g, id);
    if (!n.base_service) continue;  // start/target have no ports
    const ServiceDescriptor& base = descriptor(catalog, *n.base_service);
    for (const Port& port : base.ports) {
      if (port.direction != PortDirection::requirement) continue;
      auto conn = provider_for(n, port.functionality);
      if (!conn)
        throw ContractError("wiring_plan: requirement " +
                            std::string(to_string(port.functionality)) +
                            " of service '" + base.id + "' cannot be satisfied");
      wiring.push_back(*conn);
    }
  }
  return wiring;
}

Architecture orchestrate(const Catalog& catalog, const CostWeights& weights,
                         std::uint64_t epoch) {
  ServiceGraph g = create_service_graph(catalog, weights);
  PathResult path = dijkstra(g, ServiceGraph::kStartId, ServiceGraph::kTargetId);
  Architecture arch;
  arch.wiring = wiring_plan(g, path, catalog);
  for (const auto& id : path.nodes) arch.node_costs.push_back(g.find_node(id)->node_cost);
  arch.path = std::move(path);
  arch.epoch = epoch;
  return arch;
}

Orchestrator::Orchestrator(Catalog catalog, CostWeights weights)
    : catalog_(std::move(catalog)), weights_(weights) {
  weights_.validate();
}

const Architecture& Orchestrator::initialize() {
  current_ = orchestrate(catalog_, weights_, 1);
  epoch_ = 1;
  stale_ = false;
  return *current_;
}

EventOutcome Orchestrator::handle_event(const OrchestrationEvent& event) {
  // Validate and apply to catalog/weights first; invalid events leave the
  // state untouched.
  if (const auto* added = std::get_if<ServiceAdded>(&event)) {
    if (catalog_.contains(added->service.id))
      throw EventError("service_added: id '" + added->service.id + "' already exists");
    try {
      catalog_.add(added->service);
    } catch (const ContractError& e) {
      throw EventError(std::string("service_added: ") + e.what());
    }
  } else if (const auto* removed = std::get_if<ServiceRemoved>(&event)) {
    if (!catalog_.contains(removed->id))
      throw EventError("service_removed: no service with id '" + removed->id + "'");
    catalog_.remove(removed->id);
  } else if (const auto* updated = std::get_if<ServiceUpdated>(&event)) {
    if (!catalog_.contains(updated->service.id))
      throw EventError("service_updated: no service with id '" + updated->service.id + "'");
    try {
      catalog_.update(updated->service);
    } catch (const ContractError& e) {
      throw EventError(std::string("service_updated: ") + e.what());
    }
  } else if (const auto* weights = std::get_if<WeightsChanged>(&event)) {
    try {
      weights->weights.validate();
    } catch (const ContractError& e) {
      throw EventError(std::string("weights_changed: ") + e.what());
    }
    weights_ = weights->weights;
  }

  EventOutcome outcome;
  try {
    Architecture next = orchestrate(catalog_, weights_, epoch_ + 1);
    stale_ = false;
    if (current_ && current_->path.nodes == next.path.nodes) {
      // Same selection: keep the epoch, refresh costs/wiring under the new
      // catalog and weights.
      next.epoch = epoch_;
      current_ = std::move(next);
      return outcome;
    }
    epoch_ += 1;
    next.epoch = epoch_;
    current_ = std::move(next);
    outcome.architecture = current_;
  } catch (const Error& e) {
    stale_ = current_.has_value();
    outcome.stale = stale_;
    outcome.message = e.what();
  }
  return outcome;
}

std::string Orchestrator::report() const {
  std::string out;
  if (!current_) {
    out += "epoch: none\n";
    out += "status: no architecture\n";
    return out;
  }
  const Architecture& a = *current_;
  out += "epoch: " + std::to_string(a.epoch) + "\n";
  out += std::string("status: ") + (stale_ ? "stale" : "active") + "\n";
  out += "path: " + join(a.path.nodes, " -> ") + "\n";
  out += "node costs:\n";
  for (std::size_t i = 0; i < a.path.nodes.size(); ++i) {
    const std::string& id = a.path.nodes[i];
    if (id == ServiceGraph::kStartId || id == ServiceGraph::kTargetId) continue;
    out += "  " + id + " " + format_number(a.node_costs[i]) + "\n";
  }
  out += "total cost: " + format_number(a.path.total_cost) + "\n";
  out += "wiring:\n";
  for (const auto& c : a.wiring)
    out += "  " + c.provider + " -> " + c.consumer + " [" +
           to_string(c.functionality) + "]\n";
  return out;
}

}  // namespace maestro
