#pragma once

#include <string>
#include <vector>

#include "maestro/service_graph.hpp"

namespace maestro {

struct PathResult {
  std::vector<std::string> nodes;  // ordered source..sink
  double total_cost = 0.0;
};

// Dijkstra from source to sink over nonnegative weights. Among equal-cost
// paths the lexicographically smallest node-id sequence is returned, so the
// result does not depend on edge insertion order. Throws ContractError for
// unknown endpoints and NoPathError (naming the last reachable layer) when
// the sink cannot be reached.
PathResult dijkstra(const ServiceGraph& g, const std::string& source,
                    const std::string& sink);

}  // namespace maestro
