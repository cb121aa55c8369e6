#include "fwrta/extended_rta.hpp"

namespace fwrta {

void ExtendedParams::validate() const {
  if (!(gamma_p > 0.0)) throw RtaError(ErrorKind::InvalidParameter, "gamma_p must be positive");
  alpha.validate();
  W.validate();
  if (mode.kind == FilterMode::Kind::Smooth && !(mode.nu > 0.0)) {
    throw RtaError(ErrorKind::InvalidParameter, "smoothing nu must be positive");
  }
}

RtaOutput rta_extended(const AircraftState& x, double t, const ControlInput& u_d,
                       const ConstraintSet& set, const ExtendedParams& params,
                       const GravityParam& g, const ModelLimits& limits) {
  const HdotAffine<double> hd = hdot_e_affine(x, t, set, params, g, limits);
  const Vec3d ud = u_d.to_vector();
  const double a = hd.drift + hd.input_row.dot(ud.transpose()) + params.alpha(hd.value);
  const FilterResult<double> res = apply_filter<double>(ud, a, hd.input_row, params.W, params.mode);

  RtaOutput out;
  out.u = ControlInput::from_vector(res.u);
  out.u.P = u_d.P;
  out.barrier = hd.value;
  out.constraint = a;
  out.infeasible = res.infeasible;
  out.intervened = out.u.A_T != u_d.A_T || out.u.Q != u_d.Q;
  return out;
}

}  // namespace fwrta
