#include "maestro/service_model.hpp"

#include <algorithm>

namespace maestro {

const char* to_string(Functionality f) {
  switch (f) {
    case Functionality::measured_output: return "tau_y";
    case Functionality::control_input: return "tau_u";
    case Functionality::state_estimate: return "tau_x";
    case Functionality::model: return "tau_model";
    case Functionality::reference: return "tau_ref";
  }
  return "?";
}

std::optional<Functionality> functionality_from_string(std::string_view s) {
  if (s == "tau_y" || s == "y") return Functionality::measured_output;
  if (s == "tau_u" || s == "u") return Functionality::control_input;
  if (s == "tau_x" || s == "x") return Functionality::state_estimate;
  if (s == "tau_model" || s == "model") return Functionality::model;
  if (s == "tau_ref" || s == "ref") return Functionality::reference;
  return std::nullopt;
}

bool ports_compatible(const Port& req, const Port& guar) {
  if (req.direction != PortDirection::requirement)
    throw ContractError("ports_compatible: first argument must be a requirement");
  if (guar.direction != PortDirection::guarantee)
    throw ContractError("ports_compatible: second argument must be a guarantee");
  return req.functionality == guar.functionality;
}

const char* to_string(ComplexityLevel level) {
  switch (level) {
    case ComplexityLevel::low: return "low";
    case ComplexityLevel::medium: return "medium";
    case ComplexityLevel::high: return "high";
  }
  return "?";
}

std::optional<ComplexityLevel> complexity_from_string(std::string_view s) {
  if (s == "low") return ComplexityLevel::low;
  if (s == "medium") return ComplexityLevel::medium;
  if (s == "high") return ComplexityLevel::high;
  return std::nullopt;
}

int default_state_dimension(ComplexityLevel level) {
  switch (level) {
    case ComplexityLevel::low: return 1;
    case ComplexityLevel::medium: return 2;
    case ComplexityLevel::high: return 3;
  }
  return 1;
}

bool complexity_geq(const ModelComplexity& a, const ModelComplexity& b) {
  return static_cast<int>(a.level) >= static_cast<int>(b.level);
}

const char* to_string(ServiceKind kind) {
  switch (kind) {
    case ServiceKind::sensor: return "sensor";
    case ServiceKind::filter: return "filter";
    case ServiceKind::controller: return "controller";
    case ServiceKind::actuator: return "actuator";
    case ServiceKind::model: return "model";
  }
  return "?";
}

std::optional<ServiceKind> kind_from_string(std::string_view s) {
  if (s == "sensor") return ServiceKind::sensor;
  if (s == "filter") return ServiceKind::filter;
  if (s == "controller") return ServiceKind::controller;
  if (s == "actuator") return ServiceKind::actuator;
  if (s == "model") return ServiceKind::model;
  return std::nullopt;
}

std::vector<Port> default_ports(ServiceKind kind, bool requires_model) {
  using F = Functionality;
  constexpr auto req = PortDirection::requirement;
  constexpr auto guar = PortDirection::guarantee;
  switch (kind) {
    case ServiceKind::sensor:
      return {{guar, F::measured_output}};
    case ServiceKind::filter:
      if (requires_model)
        return {{req, F::measured_output}, {req, F::control_input},
                {req, F::model}, {guar, F::state_estimate}};
      return {{req, F::measured_output}, {guar, F::state_estimate}};
    case ServiceKind::controller:
      if (requires_model)
        return {{req, F::state_estimate}, {req, F::reference},
                {req, F::model}, {guar, F::control_input}};
      return {{req, F::state_estimate}, {req, F::reference},
              {guar, F::control_input}};
    case ServiceKind::actuator:
      return {{req, F::control_input}};
    case ServiceKind::model:
      return {{guar, F::model}};
  }
  return {};
}

void ServiceDescriptor::validate() const {
  if (id.empty())
    throw ContractError("service id must not be empty");
  if (id == "start" || id == "target")
    throw ContractError("service id '" + id + "' is reserved");
  for (char c : id) {
    const bool ok = (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') ||
                    (c >= '0' && c <= '9') || c == '-' || c == '_' || c == '.';
    if (!ok)
      throw ContractError("service id '" + id + "' contains invalid character '" +
                          std::string(1, c) + "'");
  }
  if (!(attrs.x_comp > 0.0))
    throw ContractError("service '" + id + "': x_comp must be > 0");
  if (!(attrs.y_inacc > 0.0))
    throw ContractError("service '" + id + "': y_inacc must be > 0");
  if (kind == ServiceKind::model && !complexity.has_value())
    throw ContractError("service '" + id + "': model services need a complexity");
  if (kind != ServiceKind::model && complexity.has_value())
    throw ContractError("service '" + id + "': only model services carry a complexity");
  if (complexity && complexity->state_dimension <= 0)
    throw ContractError("service '" + id + "': state_dimension must be positive");
  if (requires_model && kind != ServiceKind::filter && kind != ServiceKind::controller)
    throw ContractError("service '" + id + "': requires_model is only valid for filters and controllers");
  // requirements and guarantees are disjoint collections
  for (const Port& a : ports) {
    if (a.direction != PortDirection::requirement) continue;
    for (const Port& b : ports) {
      if (b.direction == PortDirection::guarantee && a.functionality == b.functionality)
        throw ContractError("service '" + id + "': port " + to_string(a.functionality) +
                            " appears as both requirement and guarantee");
    }
  }
}

Catalog::Catalog(std::vector<ServiceDescriptor> services) {
  for (auto& s : services) add(std::move(s));
}

void Catalog::add(ServiceDescriptor service) {
  service.validate();
  if (contains(service.id))
    throw ContractError("duplicate service id '" + service.id + "'");
  services_.push_back(std::move(service));
}

void Catalog::remove(const std::string& id) {
  auto it = std::find_if(services_.begin(), services_.end(),
                         [&](const ServiceDescriptor& s) { return s.id == id; });
  if (it == services_.end())
    throw ContractError("no service with id '" + id + "'");
  services_.erase(it);
}

void Catalog::update(ServiceDescriptor service) {
  service.validate();
  auto it = std::find_if(services_.begin(), services_.end(),
                         [&](const ServiceDescriptor& s) { return s.id == service.id; });
  if (it == services_.end())
    throw ContractError("no service with id '" + service.id + "'");
  *it = std::move(service);
}

const ServiceDescriptor* Catalog::find(const std::string& id) const {
  for (const auto& s : services_)
    if (s.id == id) return &s;
  return nullptr;
}

}  // namespace maestro
