#include "maestro/shortest_path.hpp"

#include <algorithm>
#include <limits>
#include <queue>

namespace maestro {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

}  // namespace

PathResult dijkstra(const ServiceGraph& g, const std::string& source,
                    const std::string& sink) {
  const int src = g.node_index(source);
  const int dst = g.node_index(sink);
  if (src < 0) throw ContractError("dijkstra: unknown source node '" + source + "'");
  if (dst < 0) throw ContractError("dijkstra: unknown sink node '" + sink + "'");
  for (const auto& e : g.edges())
    if (e.weight < 0.0)
      throw ContractError("dijkstra: negative edge weight");

  const int n = static_cast<int>(g.nodes().size());
  std::vector<double> dist(n, kInf);
  std::vector<char> done(n, 0);
  using Item = std::pair<double, int>;
  std::priority_queue<Item, std::vector<Item>, std::greater<Item>> queue;
  dist[src] = 0.0;
  queue.push({0.0, src});
  while (!queue.empty()) {
    auto [d, u] = queue.top();
    queue.pop();
    if (done[u]) continue;
    done[u] = 1;
    for (int ei : g.out_edges(u)) {
      const GraphEdge& e = g.edges()[ei];
      double nd = d + e.weight;
      if (nd < dist[e.to]) {
        dist[e.to] = nd;
        queue.push({nd, e.to});
      }
    }
  }

  if (dist[dst] == kInf) {
    int deepest = layer_of(g.node(src).kind);
    for (int i = 0; i < n; ++i)
      if (dist[i] < kInf)
        deepest = std::max(deepest, layer_of(g.node(i).kind));
    throw NoPathError("no path from '" + source + "' to '" + sink +
                      "'; last reachable layer: " +
                      to_string(static_cast<NodeKind>(deepest)));
  }

  // An edge is tight when it preserves the shortest distance exactly; ties
  // are ties only at 0 ulps. Mark every node that can still reach the sink
  // through tight edges, walking backwards from the sink.
  auto tight = [&](const GraphEdge& e) {
    return dist[e.from] + e.weight == dist[e.to];
  };
  std::vector<char> on_path(n, 0);
  on_path[dst] = 1;
  std::vector<int> stack{dst};
  while (!stack.empty()) {
    int v = stack.back();
    stack.pop_back();
    for (int ei : g.in_edges(v)) {
      const GraphEdge& e = g.edges()[ei];
      if (!on_path[e.from] && dist[e.from] < kInf && tight(e)) {
        on_path[e.from] = 1;
        stack.push_back(e.from);
      }
    }
  }

  // Greedy forward walk over tight on-path edges, always taking the smallest
  // node id: the lexicographically smallest optimal node sequence.
  PathResult result;
  result.total_cost = dist[dst];
  result.nodes.push_back(g.node(src).id);
  int current = src;
  while (current != dst) {
    int best = -1;
    for (int ei : g.out_edges(current)) {
      const GraphEdge& e = g.edges()[ei];
      if (!on_path[e.to] || !tight(e)) continue;
      if (best < 0 || g.node(e.to).id < g.node(best).id) best = e.to;
    }
    if (best < 0 || result.nodes.size() > static_cast<std::size_t>(n))
      throw NoPathError("dijkstra: path reconstruction failed");
    current = best;
    result.nodes.push_back(g.node(current).id);
  }
  return result;
}

}  // namespace maestro
