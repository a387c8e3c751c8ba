#pragma once

#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "maestro/errors.hpp"

namespace maestro {

// Data-kind tag carried by a port. A requirement and a guarantee are
// compatible exactly when their tags are equal.
enum class Functionality {
  measured_output,  // tau_y
  control_input,    // tau_u
  state_estimate,   // tau_x
  model,            // tau_model
  reference,        // tau_ref
};

const char* to_string(Functionality f);
std::optional<Functionality> functionality_from_string(std::string_view s);

enum class PortDirection { requirement, guarantee };

struct Port {
  PortDirection direction;
  Functionality functionality;

  bool operator==(const Port&) const = default;
};

// True iff the tags match. `req` must be a requirement and `guar` a guarantee.
bool ports_compatible(const Port& req, const Port& guar);

enum class ComplexityLevel { low, medium, high };

const char* to_string(ComplexityLevel level);
std::optional<ComplexityLevel> complexity_from_string(std::string_view s);

// State dimension used when a catalog does not declare one: low=1, medium=2,
// high=3 (the three-tank state subsets).
int default_state_dimension(ComplexityLevel level);

struct ModelComplexity {
  ComplexityLevel level = ComplexityLevel::low;
  int state_dimension = 1;  // dimension of the system matrix A

  bool operator==(const ModelComplexity&) const = default;
};

// Total order low < medium < high.
bool complexity_geq(const ModelComplexity& a, const ModelComplexity& b);

struct CostAttributes {
  double x_comp = 1.0;   // computation factor, > 0
  double y_inacc = 1.0;  // inaccuracy, > 0

  bool operator==(const CostAttributes&) const = default;
};

enum class ServiceKind { sensor, filter, controller, actuator, model };

const char* to_string(ServiceKind kind);
std::optional<ServiceKind> kind_from_string(std::string_view s);

// Canonical port set for a service of the given kind. Catalog files do not
// list ports; they follow from the kind and the requires_model flag.
//   sensor:               guarantees tau_y
//   filter (model-free):  requires tau_y;                       guarantees tau_x
//   filter (with model):  requires tau_y, tau_u, tau_model;     guarantees tau_x
//   controller (free):    requires tau_x, tau_ref;              guarantees tau_u
//   controller (model):   requires tau_x, tau_ref, tau_model;   guarantees tau_u
//   actuator:             requires tau_u
//   model:                guarantees tau_model
std::vector<Port> default_ports(ServiceKind kind, bool requires_model);

struct ServiceDescriptor {
  std::string id;
  ServiceKind kind = ServiceKind::sensor;
  bool requires_model = false;  // meaningful for filter/controller only
  std::vector<Port> ports;
  CostAttributes attrs;
  std::optional<ModelComplexity> complexity;  // present iff kind == model
  std::map<std::string, double> params;       // behavior parameters

  // Throws ContractError on any invariant violation (nonpositive attributes,
  // complexity presence mismatch, reserved id, overlapping port sets).
  void validate() const;

  bool operator==(const ServiceDescriptor&) const = default;
};

// Ordered service collection with unique ids. Order is preserved across
// add/remove/update so graph construction stays deterministic.
class Catalog {
 public:
  Catalog() = default;
  explicit Catalog(std::vector<ServiceDescriptor> services);

  void add(ServiceDescriptor service);                // throws on duplicate id
  void remove(const std::string& id);                 // throws if absent
  void update(ServiceDescriptor service);             // throws if absent
  const ServiceDescriptor* find(const std::string& id) const;
  bool contains(const std::string& id) const { return find(id) != nullptr; }

  const std::vector<ServiceDescriptor>& services() const { return services_; }
  std::size_t size() const { return services_.size(); }
  bool empty() const { return services_.empty(); }
  auto begin() const { return services_.begin(); }
  auto end() const { return services_.end(); }

 private:
  std::vector<ServiceDescriptor> services_;
};

}  // namespace maestro
