#include "maestro/verify.hpp"

#include <algorithm>

#include "maestro/catalog_io.hpp"
#include "maestro/format.hpp"

namespace maestro {

namespace {

struct Enumerator {
  const ServiceGraph& g;
  int target;
  std::vector<std::string> current;
  double cost = 0.0;
  std::optional<PathResult> best;

  void visit(int node) {
    current.push_back(g.node(node).id);
    if (node == target) {
      const bool better =
          !best || cost < best->total_cost ||
          (cost == best->total_cost && current < best->nodes);
      if (better) best = PathResult{current, cost};
    } else {
      for (int ei : g.out_edges(node)) {
        const GraphEdge& e = g.edges()[ei];
        cost += e.weight;
        visit(e.to);
        cost -= e.weight;
      }
    }
    current.pop_back();
  }
};

}  // namespace

std::optional<PathResult> enumerate_shortest_path(const ServiceGraph& g) {
  int start = g.node_index(ServiceGraph::kStartId);
  int target = g.node_index(ServiceGraph::kTargetId);
  if (start < 0 || target < 0)
    throw ContractError("enumerate_shortest_path: graph lacks start/target");
  Enumerator walk{g, target, {}, 0.0, std::nullopt};
  walk.visit(start);
  return walk.best;
}

Catalog make_random_catalog(std::mt19937_64& rng) {
  auto uniform = [&](int lo, int hi) {
    return lo + static_cast<int>(rng() % static_cast<std::uint64_t>(hi - lo + 1));
  };
  const int sensors = uniform(1, 5);
  const int filters = uniform(1, 5);
  const int controllers = uniform(1, 5);
  const int actuators = uniform(1, 5);
  const int models = uniform(1, 3);

  Catalog catalog;
  auto attrs = [&]() {
    return CostAttributes{static_cast<double>(uniform(1, 20)),
                          static_cast<double>(uniform(1, 20))};
  };
  auto add = [&](const std::string& id, ServiceKind kind, bool requires_model) {
    ServiceDescriptor s;
    s.id = id;
    s.kind = kind;
    s.requires_model = requires_model;
    s.attrs = attrs();
    s.ports = default_ports(kind, requires_model);
    catalog.add(std::move(s));
  };

  for (int i = 0; i < models; ++i) {
    ServiceDescriptor s;
    s.id = "model-" + std::to_string(i);
    s.kind = ServiceKind::model;
    s.attrs = attrs();
    auto level = static_cast<ComplexityLevel>(i);  // distinct levels
    s.complexity = ModelComplexity{level, default_state_dimension(level)};
    s.ports = default_ports(s.kind, false);
    catalog.add(std::move(s));
  }
  for (int i = 0; i < sensors; ++i)
    add("sensor-" + std::to_string(i), ServiceKind::sensor, false);
  for (int i = 0; i < filters; ++i)
    add("filter-" + std::to_string(i), ServiceKind::filter, uniform(0, 1) == 1);
  for (int i = 0; i < controllers; ++i)
    add("ctrl-" + std::to_string(i), ServiceKind::controller, uniform(0, 1) == 1);
  for (int i = 0; i < actuators; ++i)
    add("act-" + std::to_string(i), ServiceKind::actuator, false);
  return catalog;
}

std::string VerifyReport::summary() const {
  std::string out = std::to_string(checked - mismatches) + "/" +
                    std::to_string(checked) + " match";
  if (mismatches) out += "\n" + first_mismatch;
  return out;
}

VerifyReport run_path_verification(const VerifyOptions& options,
                                   const PathFault& fault) {
  std::mt19937_64 rng(options.seed);
  VerifyReport report;
  for (std::uint32_t i = 0; i < options.count; ++i) {
    Catalog catalog = make_random_catalog(rng);
    CostWeights weights{static_cast<double>(1 + rng() % 100),
                        static_cast<double>(1 + rng() % 100)};
    ServiceGraph g = create_service_graph(catalog, weights);

    std::optional<PathResult> via_dijkstra;
    try {
      via_dijkstra = dijkstra(g, ServiceGraph::kStartId, ServiceGraph::kTargetId);
    } catch (const NoPathError&) {
      via_dijkstra = std::nullopt;
    }
    if (fault) fault(via_dijkstra);
    const std::optional<PathResult> via_enumeration = enumerate_shortest_path(g);

    ++report.checked;
    const bool both_empty = !via_dijkstra && !via_enumeration;
    const bool match = both_empty ||
                       (via_dijkstra && via_enumeration &&
                        via_dijkstra->total_cost == via_enumeration->total_cost &&
                        via_dijkstra->nodes == via_enumeration->nodes);
    if (match) continue;
    ++report.mismatches;
    if (report.first_mismatch.empty()) {
      std::string detail = "mismatch at case " + std::to_string(i) + " (weights " +
                           format_number(weights.alpha_comp) + ", " +
                           format_number(weights.beta_inacc) + ")\n";
      detail += "dijkstra: ";
      detail += via_dijkstra ? join(via_dijkstra->nodes, " -> ") + " cost " +
                                   format_number(via_dijkstra->total_cost)
                             : std::string("no path");
      detail += "\nenumeration: ";
      detail += via_enumeration ? join(via_enumeration->nodes, " -> ") + " cost " +
                                      format_number(via_enumeration->total_cost)
                                : std::string("no path");
      detail += "\ncatalog:\n" + serialize_catalog(catalog);
      report.first_mismatch = std::move(detail);
    }
  }
  return report;
}

}  // namespace maestro
