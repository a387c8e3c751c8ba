#pragma once

#include "maestro/errors.hpp"

namespace maestro {

// Three-tank cascade: pump inflow into tank 1, coupling valves 1->2 and
// 2->3, free outlet at tank 3. Units: m, m^2, m^3/s.
struct PlantParams {
  double a1 = 0.0154;  // tank cross sections
  double a2 = 0.0154;
  double a3 = 0.0154;
  double c12 = 1.0e-4;  // valve coefficients (effective orifice areas)
  double c23 = 1.0e-4;
  double c3 = 3.0e-5;
  double g = 9.81;
  double h_max = 0.6;    // tank height; levels clip here (overflow)
  double u_max = 3.0e-4; // pump limit
  double op_level = 0.3; // tank-3 level the service models are linearized at

  void validate() const;
};

struct PlantState {
  double h1 = 0.0;
  double h2 = 0.0;
  double h3 = 0.0;
};

// Explicit Euler step of the Torricelli cascade; levels are floored at 0 and
// clipped at h_max.
PlantState plant_step(const PlantState& s, double u, const PlantParams& p,
                      double ts);

struct Equilibrium {
  PlantState levels;
  double u = 0.0;
};

// Steady state holding tank 3 at `h3_level` (closed form: equal flows through
// every valve). Throws ContractError if the level is not sustainable within
// h_max / u_max.
Equilibrium equilibrium_for(const PlantParams& p, double h3_level);

}  // namespace maestro
