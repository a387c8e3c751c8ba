#include "maestro/service_graph.hpp"

#include <algorithm>
#include <set>

#include "maestro/format.hpp"

namespace maestro {

const char* to_string(NodeKind kind) {
  switch (kind) {
    case NodeKind::start: return "start";
    case NodeKind::sensor: return "sensor";
    case NodeKind::filter: return "filter";
    case NodeKind::controller: return "controller";
    case NodeKind::actuator: return "actuator";
    case NodeKind::target: return "target";
  }
  return "?";
}

int layer_of(NodeKind kind) {
  switch (kind) {
    case NodeKind::start: return 0;
    case NodeKind::sensor: return 1;
    case NodeKind::filter: return 2;
    case NodeKind::controller: return 3;
    case NodeKind::actuator: return 4;
    case NodeKind::target: return 5;
  }
  return -1;
}

int ServiceGraph::node_index(const std::string& id) const {
  for (std::size_t i = 0; i < nodes_.size(); ++i)
    if (nodes_[i].id == id) return static_cast<int>(i);
  return -1;
}

const GraphNode* ServiceGraph::find_node(const std::string& id) const {
  int i = node_index(id);
  return i < 0 ? nullptr : &nodes_[i];
}

bool ServiceGraph::has_edge(const std::string& from_id, const std::string& to_id) const {
  int from = node_index(from_id);
  int to = node_index(to_id);
  if (from < 0 || to < 0) return false;
  for (int e : out_edges_[from])
    if (edges_[e].to == to) return true;
  return false;
}

int ServiceGraph::add_node(GraphNode node) {
  nodes_.push_back(std::move(node));
  out_edges_.emplace_back();
  in_edges_.emplace_back();
  return static_cast<int>(nodes_.size()) - 1;
}

void ServiceGraph::add_edge(int from, int to) {
  GraphEdge e;
  e.from = from;
  e.to = to;
  e.weight = nodes_[to].node_cost;  // the cost of choosing the pointed-to service
  int index = static_cast<int>(edges_.size());
  edges_.push_back(e);
  out_edges_[from].push_back(index);
  in_edges_[to].push_back(index);
}

bool filter_controller_compatible(const GraphNode& filter_node,
                                  const GraphNode& controller_node) {
  if (filter_node.kind != NodeKind::filter)
    throw ContractError("filter_controller_compatible: first node is not a filter");
  if (controller_node.kind != NodeKind::controller)
    throw ContractError("filter_controller_compatible: second node is not a controller");
  if (!controller_node.effective_complexity.has_value())
    return true;  // a model-free controller accepts any filter output
  if (!filter_node.effective_complexity.has_value())
    return false;  // a model-free filter cannot supply a model-based controller
  ModelComplexity f{*filter_node.effective_complexity, 0};
  ModelComplexity c{*controller_node.effective_complexity, 0};
  return complexity_geq(f, c);
}

namespace {

GraphNode make_atomic_node(const ServiceDescriptor& s, NodeKind kind,
                           const CostWeights& w) {
  GraphNode n;
  n.id = s.id;
  n.kind = kind;
  n.base_service = s.id;
  n.node_cost = service_cost(s.attrs, w);
  return n;
}

GraphNode make_grouped_node(const ServiceDescriptor& base,
                            const ServiceDescriptor& model, NodeKind kind,
                            const CostWeights& w) {
  GraphNode n;
  n.id = base.id + "+" + model.id;
  n.kind = kind;
  n.base_service = base.id;
  n.model_service = model.id;
  n.effective_complexity = model.complexity->level;
  n.node_cost = service_cost(grouped_attributes(base.kind, model.attrs), w);
  return n;
}

}  // namespace

ServiceGraph create_service_graph(const Catalog& catalog, const CostWeights& w) {
  w.validate();

  std::vector<const ServiceDescriptor*> sensors, filters, controllers, actuators, models;
  for (const auto& s : catalog) {
    switch (s.kind) {
      case ServiceKind::sensor: sensors.push_back(&s); break;
      case ServiceKind::filter: filters.push_back(&s); break;
      case ServiceKind::controller: controllers.push_back(&s); break;
      case ServiceKind::actuator: actuators.push_back(&s); break;
      case ServiceKind::model: models.push_back(&s); break;
    }
  }

  if (sensors.empty())
    throw GraphError("cannot build service graph: no sensor service in the catalog");
  if (actuators.empty())
    throw GraphError("cannot build service graph: no actuator service in the catalog");
  for (const auto* s : filters)
    if (s->requires_model && models.empty())
      throw GraphError("cannot build service graph: filter '" + s->id +
                       "' requires a model but the catalog has none");
  for (const auto* s : controllers)
    if (s->requires_model && models.empty())
      throw GraphError("cannot build service graph: controller '" + s->id +
                       "' requires a model but the catalog has none");

  ServiceGraph g;

  GraphNode start;
  start.id = ServiceGraph::kStartId;
  start.kind = NodeKind::start;
  int start_index = g.add_node(start);

  std::vector<int> sensor_nodes;
  for (const auto* s : sensors) {
    int i = g.add_node(make_atomic_node(*s, NodeKind::sensor, w));
    g.add_edge(start_index, i);
    sensor_nodes.push_back(i);
  }

  std::vector<int> filter_nodes;
  for (const auto* f : filters) {
    if (f->requires_model) {
      for (const auto* m : models) {
        int i = g.add_node(make_grouped_node(*f, *m, NodeKind::filter, w));
        for (int s : sensor_nodes) g.add_edge(s, i);
        filter_nodes.push_back(i);
      }
    } else {
      int i = g.add_node(make_atomic_node(*f, NodeKind::filter, w));
      for (int s : sensor_nodes) g.add_edge(s, i);
      filter_nodes.push_back(i);
    }
  }

  std::vector<int> controller_nodes;
  auto connect_filters = [&](int controller_index) {
    for (int f : filter_nodes)
      if (filter_controller_compatible(g.node(f), g.node(controller_index)))
        g.add_edge(f, controller_index);
  };
  for (const auto* c : controllers) {
    if (c->requires_model) {
      for (const auto* m : models) {
        int i = g.add_node(make_grouped_node(*c, *m, NodeKind::controller, w));
        connect_filters(i);
        controller_nodes.push_back(i);
      }
    } else {
      int i = g.add_node(make_atomic_node(*c, NodeKind::controller, w));
      connect_filters(i);
      controller_nodes.push_back(i);
    }
  }

  std::vector<int> actuator_nodes;
  for (const auto* a : actuators) {
    int i = g.add_node(make_atomic_node(*a, NodeKind::actuator, w));
    for (int c : controller_nodes) g.add_edge(c, i);
    actuator_nodes.push_back(i);
  }

  GraphNode target;
  target.id = ServiceGraph::kTargetId;
  target.kind = NodeKind::target;
  int target_index = g.add_node(target);
  for (int a : actuator_nodes) g.add_edge(a, target_index);

  return g;
}

std::string export_dot(const ServiceGraph& g,
                       const std::vector<std::string>& highlight) {
  std::set<int> marked;
  for (const auto& id : highlight) {
    int i = g.node_index(id);
    if (i < 0)
      throw ContractError("export_dot: highlighted node '" + id + "' is not in the graph");
    marked.insert(i);
  }
  auto edge_marked = [&](const GraphEdge& e) {
    if (!marked.count(e.from) || !marked.count(e.to)) return false;
    // consecutive on the highlighted path
    for (std::size_t i = 0; i + 1 < highlight.size(); ++i)
      if (g.node_index(highlight[i]) == e.from && g.node_index(highlight[i + 1]) == e.to)
        return true;
    return false;
  };

  std::string out;
  out += "digraph service_graph {\n";
  out += "  rankdir=LR;\n";
  out += "  node [shape=box];\n";
  for (const auto& n : g.nodes()) {
    out += "  \"" + n.id + "\" [label=\"" + n.id + " (" +
           format_number(n.node_cost) + ")\"";
    if (marked.count(g.node_index(n.id)))
      out += ", color=red, penwidth=2";
    out += "];\n";
  }
  for (const auto& e : g.edges()) {
    out += "  \"" + g.node(e.from).id + "\" -> \"" + g.node(e.to).id +
           "\" [label=\"" + format_number(e.weight) + "\"";
    if (edge_marked(e)) out += ", color=red, penwidth=2";
    out += "];\n";
  }
  out += "}\n";
  return out;
}

}  // namespace maestro
