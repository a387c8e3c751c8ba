#include "maestro/cost_engine.hpp"

namespace maestro {

void CostWeights::validate() const {
  if (!(alpha_comp > 0.0))
    throw ContractError("cost weights: alpha_comp must be > 0");
  if (!(beta_inacc > 0.0))
    throw ContractError("cost weights: beta_inacc must be > 0");
}

double service_cost(const CostAttributes& attrs, const CostWeights& w) {
  return w.alpha_comp * attrs.x_comp + w.beta_inacc * attrs.y_inacc;
}

CostAttributes grouped_attributes(ServiceKind base_kind,
                                  const CostAttributes& model_attrs) {
  const double m = model_attrs.x_comp;
  switch (base_kind) {
    case ServiceKind::controller:
      return {m * m, model_attrs.y_inacc};
    case ServiceKind::filter:
      return {m * m * m, model_attrs.y_inacc};
    default:
      throw ContractError("grouped_attributes: base kind must be filter or controller");
  }
}

}  // namespace maestro
