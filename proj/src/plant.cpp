#include "maestro/plant.hpp"

#include <algorithm>
#include <cmath>

namespace maestro {

void PlantParams::validate() const {
  auto positive = [](double v) { return v > 0.0 && std::isfinite(v); };
  if (!positive(a1) || !positive(a2) || !positive(a3))
    throw ContractError("plant: tank areas must be positive");
  if (!positive(c12) || !positive(c23) || !(c3 >= 0.0) || !std::isfinite(c3))
    throw ContractError("plant: valve coefficients must be positive (c3 >= 0)");
  if (!positive(g) || !positive(h_max) || !positive(u_max))
    throw ContractError("plant: g, h_max and u_max must be positive");
  if (!(op_level > 0.0) || !(op_level < h_max))
    throw ContractError("plant: operating level must lie in (0, h_max)");
}

namespace {

// Signed Torricelli flow through a coupling valve.
double coupling_flow(double c, double g, double upstream, double downstream) {
  double d = upstream - downstream;
  double q = c * std::sqrt(2.0 * g * std::fabs(d));
  return d >= 0.0 ? q : -q;
}

}  // namespace

PlantState plant_step(const PlantState& s, double u, const PlantParams& p,
                      double ts) {
  if (!(u >= 0.0)) throw ContractError("plant_step: u must be >= 0");
  if (!(ts > 0.0)) throw ContractError("plant_step: ts must be > 0");

  const double q12 = coupling_flow(p.c12, p.g, s.h1, s.h2);
  const double q23 = coupling_flow(p.c23, p.g, s.h2, s.h3);
  const double q3 = p.c3 * std::sqrt(2.0 * p.g * std::max(s.h3, 0.0));

  PlantState next;
  next.h1 = s.h1 + ts * (u - q12) / p.a1;
  next.h2 = s.h2 + ts * (q12 - q23) / p.a2;
  next.h3 = s.h3 + ts * (q23 - q3) / p.a3;
  next.h1 = std::clamp(next.h1, 0.0, p.h_max);
  next.h2 = std::clamp(next.h2, 0.0, p.h_max);
  next.h3 = std::clamp(next.h3, 0.0, p.h_max);
  return next;
}

Equilibrium equilibrium_for(const PlantParams& p, double h3_level) {
  if (!(h3_level >= 0.0) || !(h3_level < p.h_max))
    throw ContractError("equilibrium_for: level must lie in [0, h_max)");
  Equilibrium eq;
  const double q = p.c3 * std::sqrt(2.0 * p.g * h3_level);  // outlet flow
  const double d23 = (q / p.c23) * (q / p.c23) / (2.0 * p.g);
  const double d12 = (q / p.c12) * (q / p.c12) / (2.0 * p.g);
  eq.levels.h3 = h3_level;
  eq.levels.h2 = h3_level + d23;
  eq.levels.h1 = h3_level + d23 + d12;
  eq.u = q;
  if (eq.levels.h1 > p.h_max)
    throw ContractError("equilibrium_for: level not sustainable, tank 1 would overflow");
  if (eq.u > p.u_max)
    throw ContractError("equilibrium_for: level not sustainable within u_max");
  return eq;
}

}  // namespace maestro
