#include "fwrta/modelfree_rta.hpp"

#include <string>

namespace fwrta {

void ModelFreeParams::validate() const {
  if (!(gamma_p > 0.0) || !(sigma > 0.0) || !(Gamma_v > 0.0) || !(nu_v > 0.0)) {
    throw RtaError(ErrorKind::InvalidParameter,
                   "model-free parameters gamma_p, sigma, Gamma_v, nu_v must be positive");
  }
}

double h_V(double h_p, double V_lyap, const ModelFreeParams& params, double lambda) {
  if (!(lambda > params.gamma_p)) {
    throw RtaError(ErrorKind::InvalidGainOrdering,
                   "tracking rate lambda=" + std::to_string(lambda) +
                       " must exceed gamma_p=" + std::to_string(params.gamma_p));
  }
  return h_p - V_lyap / (2.0 * params.sigma * (lambda - params.gamma_p));
}

}  // namespace fwrta
