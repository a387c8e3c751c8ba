#pragma once

#include <optional>
#include <string>
#include <vector>

#include "maestro/cost_engine.hpp"
#include "maestro/service_model.hpp"

namespace maestro {

enum class NodeKind { start, sensor, filter, controller, actuator, target };

const char* to_string(NodeKind kind);

// Position in the fixed layer order start -> sensor -> filter -> controller
// -> actuator -> target. Every edge connects adjacent layers.
int layer_of(NodeKind kind);

struct GraphNode {
  std::string id;  // "<base>+<model>" for grouped nodes, service id otherwise
  NodeKind kind = NodeKind::start;
  std::optional<std::string> base_service;   // catalog id
  std::optional<std::string> model_service;  // catalog id, grouped nodes only
  std::optional<ComplexityLevel> effective_complexity;  // nullopt = none
  double node_cost = 0.0;  // start/target cost 0

  bool grouped() const { return model_service.has_value(); }
};

struct GraphEdge {
  int from = -1;  // node indices
  int to = -1;
  double weight = 0.0;  // node_cost of the destination node
};

// Weighted directed acyclic service graph with unique start/target nodes.
// Immutable once built; construct through create_service_graph.
class ServiceGraph {
 public:
  static constexpr const char* kStartId = "start";
  static constexpr const char* kTargetId = "target";

  const std::vector<GraphNode>& nodes() const { return nodes_; }
  const std::vector<GraphEdge>& edges() const { return edges_; }

  int node_index(const std::string& id) const;  // -1 if absent
  const GraphNode* find_node(const std::string& id) const;
  const GraphNode& node(int index) const { return nodes_[index]; }

  // Outgoing edge indices per node, in insertion order.
  const std::vector<int>& out_edges(int node_index) const {
    return out_edges_[node_index];
  }
  const std::vector<int>& in_edges(int node_index) const {
    return in_edges_[node_index];
  }

  bool has_edge(const std::string& from_id, const std::string& to_id) const;

 private:
  friend ServiceGraph create_service_graph(const Catalog&, const CostWeights&);

  int add_node(GraphNode node);
  void add_edge(int from, int to);

  std::vector<GraphNode> nodes_;
  std::vector<GraphEdge> edges_;
  std::vector<std::vector<int>> out_edges_;
  std::vector<std::vector<int>> in_edges_;
};

// A filter node may feed a controller node if the controller is model-free,
// or both carry models and the filter's complexity is >= the controller's.
// A model-free filter cannot feed a model-based controller.
bool filter_controller_compatible(const GraphNode& filter_node,
                                  const GraphNode& controller_node);

// Builds the weighted service graph from the catalog: start and target
// injection, one node per (filter|controller, model) combination for
// model-requiring services, compatibility pruning between filters and
// controllers, and incoming-edge weights equal to the destination node cost.
// Throws GraphError when a layer is empty (no sensor / no actuator) or a
// model-requiring service has no model to pair with.
ServiceGraph create_service_graph(const Catalog& catalog, const CostWeights& w);

// Deterministic Graphviz text. Nodes are labeled "id (cost)" and edges with
// their weight; nodes/edges on `highlight` get a distinct color attribute.
// Throws ContractError if a highlighted id is not in the graph.
std::string export_dot(const ServiceGraph& g,
                       const std::vector<std::string>& highlight = {});

}  // namespace maestro
