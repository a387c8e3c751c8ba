#pragma once

// Shared programmatic catalogs for the test suites, built directly against
// the service model (independent of the catalog file parser).

#include <string>

#include "maestro/service_model.hpp"

namespace test_helpers {

inline maestro::ServiceDescriptor make_service(const std::string& id,
                                               maestro::ServiceKind kind,
                                               double x, double y,
                                               bool requires_model = false) {
  maestro::ServiceDescriptor s;
  s.id = id;
  s.kind = kind;
  s.requires_model = requires_model;
  s.attrs = {x, y};
  s.ports = maestro::default_ports(kind, requires_model);
  return s;
}

inline maestro::ServiceDescriptor make_model(const std::string& id, double x,
                                             double y,
                                             maestro::ComplexityLevel level) {
  maestro::ServiceDescriptor s = make_service(id, maestro::ServiceKind::model, x, y);
  s.complexity = maestro::ModelComplexity{level, maestro::default_state_dimension(level)};
  return s;
}

// The evaluation catalog. with_mpc=false is the
// scenario-1 variant.
inline maestro::Catalog table1_catalog(bool with_mpc = true) {
  using maestro::ComplexityLevel;
  using maestro::ServiceKind;
  maestro::Catalog catalog;
  catalog.add(make_service("tank-sensor", ServiceKind::sensor, 2, 9));
  catalog.add(make_service("kalman", ServiceKind::filter, 1, 1, true));
  catalog.add(make_service("converter", ServiceKind::filter, 1, 11));
  catalog.add(make_model("model-low", 2, 10, ComplexityLevel::low));
  catalog.add(make_model("model-medium", 5, 5, ComplexityLevel::medium));
  catalog.add(make_model("model-high", 10, 1, ComplexityLevel::high));
  catalog.add(make_service("pid", ServiceKind::controller, 1, 11));
  if (with_mpc)
    catalog.add(make_service("mpc", ServiceKind::controller, 1, 1, true));
  catalog.add(make_service("tank-pump", ServiceKind::actuator, 2, 8));
  return catalog;
}

// One model-free service per layer: the degenerate 6-node chain.
inline maestro::Catalog chain_catalog() {
  using maestro::ServiceKind;
  maestro::Catalog catalog;
  catalog.add(make_service("s", ServiceKind::sensor, 1, 2));
  catalog.add(make_service("f", ServiceKind::filter, 2, 3));
  catalog.add(make_service("c", ServiceKind::controller, 3, 4));
  catalog.add(make_service("a", ServiceKind::actuator, 4, 5));
  return catalog;
}

}  // namespace test_helpers
