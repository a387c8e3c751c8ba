#include <doctest.h>

#include <algorithm>
#include <random>
#include <set>

#include "helpers.hpp"
#include "maestro/service_graph.hpp"
#include "maestro/verify.hpp"

using namespace maestro;
using test_helpers::table1_catalog;

namespace {

const CostWeights kScenario12{1.0, 100.0};

int count_lines_containing(const std::string& text, const std::string& needle) {
  int count = 0;
  std::size_t pos = 0;
  while (true) {
    std::size_t nl = text.find('\n', pos);
    if (nl == std::string::npos) break;
    if (text.substr(pos, nl - pos).find(needle) != std::string::npos) ++count;
    pos = nl + 1;
  }
  return count;
}

}  // namespace

TEST_CASE("scenario-2 catalog yields 12 nodes and 20 edges") {
  ServiceGraph g = create_service_graph(table1_catalog(), kScenario12);
  CHECK(g.nodes().size() == 12);
  CHECK(g.edges().size() == 20);

  // Hand-constructed layer tallies: 1 start->sensor, 4 sensor->filter,
  // 10 filter->controller, 4 controller->actuator, 1 actuator->target.
  int by_layer[5] = {0, 0, 0, 0, 0};
  for (const auto& e : g.edges()) ++by_layer[layer_of(g.node(e.from).kind)];
  CHECK(by_layer[0] == 1);
  CHECK(by_layer[1] == 4);
  CHECK(by_layer[2] == 10);
  CHECK(by_layer[3] == 4);
  CHECK(by_layer[4] == 1);
}

TEST_CASE("compatibility rule prunes exactly the right filter->controller edges") {
  ServiceGraph g = create_service_graph(table1_catalog(), kScenario12);

  // Medium-complexity Kalman cannot feed the
  // high-complexity MPC.
  CHECK_FALSE(g.has_edge("kalman+model-medium", "mpc+model-high"));
  CHECK_FALSE(g.has_edge("kalman+model-low", "mpc+model-medium"));
  // The converter feeds only the model-free PID.
  CHECK(g.has_edge("converter", "pid"));
  CHECK_FALSE(g.has_edge("converter", "mpc+model-low"));
  // Equal or higher filter complexity is allowed.
  CHECK(g.has_edge("kalman+model-high", "mpc+model-low"));
  CHECK(g.has_edge("kalman+model-medium", "mpc+model-medium"));
  CHECK(g.has_edge("kalman+model-low", "pid"));
}

TEST_CASE("filter_controller_compatible on nodes") {
  ServiceGraph g = create_service_graph(table1_catalog(), kScenario12);
  auto node = [&](const std::string& id) -> const GraphNode& {
    const GraphNode* n = g.find_node(id);
    REQUIRE(n != nullptr);
    return *n;
  };
  CHECK_FALSE(filter_controller_compatible(node("kalman+model-low"),
                                           node("mpc+model-medium")));
  CHECK(filter_controller_compatible(node("converter"), node("pid")));
  CHECK(filter_controller_compatible(node("kalman+model-high"), node("mpc+model-low")));
  CHECK_THROWS_AS(filter_controller_compatible(node("pid"), node("converter")),
                  ContractError);
}

TEST_CASE("node costs use the grouped attributes") {
  ServiceGraph g = create_service_graph(table1_catalog(), kScenario12);
  CHECK(g.find_node("kalman+model-medium")->node_cost == 625.0);
  CHECK(g.find_node("mpc+model-medium")->node_cost == 525.0);
  CHECK(g.find_node("mpc+model-high")->node_cost == 200.0);
  CHECK(g.find_node("tank-sensor")->node_cost == 902.0);
  CHECK(g.find_node("tank-pump")->node_cost == 802.0);
  CHECK(g.find_node("start")->node_cost == 0.0);
  CHECK(g.find_node("target")->node_cost == 0.0);
}

TEST_CASE("degenerate catalog gives the 6-node chain") {
  ServiceGraph g = create_service_graph(test_helpers::chain_catalog(), {1.0, 1.0});
  CHECK(g.nodes().size() == 6);
  CHECK(g.edges().size() == 5);
}

TEST_CASE("construction errors name the problem") {
  Catalog catalog = test_helpers::chain_catalog();
  SUBCASE("no sensor") {
    catalog.remove("s");
    CHECK_THROWS_WITH_AS(create_service_graph(catalog, {1.0, 1.0}),
                         doctest::Contains("no sensor"), GraphError);
  }
  SUBCASE("no actuator") {
    catalog.remove("a");
    CHECK_THROWS_WITH_AS(create_service_graph(catalog, {1.0, 1.0}),
                         doctest::Contains("no actuator"), GraphError);
  }
  SUBCASE("model-requiring filter without models") {
    catalog.add(test_helpers::make_service("kf", ServiceKind::filter, 1, 1, true));
    CHECK_THROWS_WITH_AS(create_service_graph(catalog, {1.0, 1.0}),
                         doctest::Contains("requires a model"), GraphError);
  }
}

TEST_CASE("graphs are layered DAGs with consistent weights") {
  std::mt19937_64 rng(123);
  for (int i = 0; i < 100; ++i) {
    Catalog catalog = make_random_catalog(rng);
    ServiceGraph g = create_service_graph(catalog, {2.0, 3.0});

    int sensors = 0, filters = 0, controllers = 0, actuators = 0, models = 0;
    for (const auto& s : catalog) {
      switch (s.kind) {
        case ServiceKind::sensor: ++sensors; break;
        case ServiceKind::filter: filters += s.requires_model ? 0 : 1; break;
        case ServiceKind::controller: controllers += s.requires_model ? 0 : 1; break;
        case ServiceKind::actuator: ++actuators; break;
        case ServiceKind::model: ++models; break;
      }
    }
    for (const auto& s : catalog)
      if (s.requires_model) {
        if (s.kind == ServiceKind::filter) filters += models;
        if (s.kind == ServiceKind::controller) controllers += models;
      }
    CHECK(g.nodes().size() ==
          static_cast<std::size_t>(2 + sensors + filters + controllers + actuators));

    // start and target appear exactly once
    CHECK(std::count_if(g.nodes().begin(), g.nodes().end(), [](const GraphNode& n) {
            return n.kind == NodeKind::start;
          }) == 1);
    CHECK(std::count_if(g.nodes().begin(), g.nodes().end(), [](const GraphNode& n) {
            return n.kind == NodeKind::target;
          }) == 1);

    for (const auto& e : g.edges()) {
      // layered: every edge crosses to the immediately next layer
      CHECK(layer_of(g.node(e.to).kind) == layer_of(g.node(e.from).kind) + 1);
      // weight equals destination node cost; target incoming weight 0
      CHECK(e.weight == g.node(e.to).node_cost);
      CHECK(e.weight >= 0.0);
    }

    // all incoming edges of a node carry the same weight
    for (std::size_t v = 0; v < g.nodes().size(); ++v)
      for (int ei : g.in_edges(static_cast<int>(v)))
        CHECK(g.edges()[ei].weight == g.node(static_cast<int>(v)).node_cost);
  }
}

TEST_CASE("the compatibility rule only ever removes filter->controller edges") {
  std::mt19937_64 rng(5);
  for (int i = 0; i < 50; ++i) {
    Catalog catalog = make_random_catalog(rng);
    ServiceGraph g = create_service_graph(catalog, {1.0, 1.0});

    int sensors = 0, filters = 0, controllers = 0, actuators = 0, fc_edges = 0;
    for (const auto& n : g.nodes()) {
      sensors += n.kind == NodeKind::sensor;
      filters += n.kind == NodeKind::filter;
      controllers += n.kind == NodeKind::controller;
      actuators += n.kind == NodeKind::actuator;
    }
    for (const auto& e : g.edges())
      fc_edges += g.node(e.from).kind == NodeKind::filter;

    // Without the rule the filter layer would be fully connected; every
    // other layer pair always is.
    CHECK(fc_edges <= filters * controllers);
    CHECK(g.edges().size() ==
          static_cast<std::size_t>(sensors + sensors * filters + fc_edges +
                                   controllers * actuators + actuators));

    // The realized edge set matches the predicate, pair by pair.
    int expected_fc = 0;
    for (const auto& f : g.nodes()) {
      if (f.kind != NodeKind::filter) continue;
      for (const auto& c : g.nodes()) {
        if (c.kind != NodeKind::controller) continue;
        const bool compatible = filter_controller_compatible(f, c);
        expected_fc += compatible;
        CHECK(g.has_edge(f.id, c.id) == compatible);
      }
    }
    CHECK(fc_edges == expected_fc);
  }
}

TEST_CASE("export_dot statement counts and determinism") {
  ServiceGraph chain = create_service_graph(test_helpers::chain_catalog(), {1.0, 1.0});
  std::string dot = export_dot(chain);
  CHECK(count_lines_containing(dot, " -> ") == 5);
  CHECK(count_lines_containing(dot, "[label=") - count_lines_containing(dot, " -> ") == 6);

  ServiceGraph g = create_service_graph(table1_catalog(), kScenario12);
  std::string big = export_dot(g);
  CHECK(count_lines_containing(big, " -> ") == 20);
  CHECK(count_lines_containing(big, "[label=") - count_lines_containing(big, " -> ") == 12);

  CHECK(export_dot(g) == big);  // identical bytes on repeat

  std::string highlighted = export_dot(
      g, {"start", "tank-sensor", "kalman+model-medium", "mpc+model-medium",
          "tank-pump", "target"});
  CHECK(count_lines_containing(highlighted, "color=red") == 6 + 5);
  CHECK_THROWS_AS(export_dot(g, {"nonexistent"}), ContractError);
}
