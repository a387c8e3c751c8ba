#pragma once

#include "maestro/service_model.hpp"

namespace maestro {

// Objective weights. Changing them is an orchestration event; they never
// mutate stored service attributes.
struct CostWeights {
  double alpha_comp = 1.0;
  double beta_inacc = 1.0;

  void validate() const;  // both strictly positive
};

// cost = alpha_comp * x_comp + beta_inacc * y_inacc
double service_cost(const CostAttributes& attrs, const CostWeights& w);

// Attributes of a grouped filter+model or controller+model node, derived from
// the model's attributes (m = model x_comp):
//   controller: x_comp = m^2, filter: x_comp = m^3; y_inacc = model y_inacc.
CostAttributes grouped_attributes(ServiceKind base_kind,
                                  const CostAttributes& model_attrs);

}  // namespace maestro
