#include "fwrta/backstepping_rta.hpp"

namespace fwrta {

void BacksteppingParams::validate() const {
  alpha_e.validate();
  alpha.validate();
  W_e.validate();
  W.validate();
  if (!(nu_e > 0.0)) throw RtaError(ErrorKind::InvalidParameter, "nu_e must be positive");
  if (!(mu_e > 0.0)) throw RtaError(ErrorKind::InvalidParameter, "mu_e must be positive");
  if (!(gamma_p > 0.0)) throw RtaError(ErrorKind::InvalidParameter, "gamma_p must be positive");
  if (mode.kind == FilterMode::Kind::Smooth && !(mode.nu > 0.0)) {
    throw RtaError(ErrorKind::InvalidParameter, "smoothing nu must be positive");
  }
}

BarrierGradient grad_h_b(const AircraftState& x, double t, const ConstraintSet& set,
                         const BacksteppingParams& params, const GravityParam& g,
                         const ModelLimits& limits) {
  using D = Dual<double>;
  BarrierGradient out;
  out.value = h_b(x, t, set, params, g, limits);
  const Vec7<double> xv = x.to_vector();
  // One directional pass per state coordinate, plus one for time.
  for (int k = 0; k <= 7; ++k) {
    Vec7<D> xd;
    for (int i = 0; i < 7; ++i) xd(i) = D(xv(i), i == k ? 1.0 : 0.0);
    const D td(t, k == 7 ? 1.0 : 0.0);
    const D hb = h_b(BasicState<D>::from_vector(xd), td, set, params, g, limits);
    if (k < 7) {
      out.dx(k) = hb.deriv;
    } else {
      out.dt = hb.deriv;
    }
  }
  return out;
}

RtaOutput rta_backstepping(const AircraftState& x, double t, const ControlInput& u_d,
                           const ConstraintSet& set, const BacksteppingParams& params,
                           const GravityParam& g, const ModelLimits& limits) {
  check_state(x, limits);
  const BarrierGradient grad = grad_h_b(x, t, set, params, g, limits);
  const Vec7<double> f = drift(x, g);
  const InputMatrix<double> G = input_matrix(x);
  const Vec3d ud = u_d.to_vector();
  const double hdot = grad.dt + (grad.dx * (f + G * ud))(0);
  const double a = hdot + params.alpha(grad.value);
  const RowVec3<double> b_raw = grad.dx * G;
  const FilterResult<double> res = apply_filter<double>(ud, a, b_raw, params.W, params.mode);

  RtaOutput out;
  out.u = ControlInput::from_vector(res.u);
  out.barrier = grad.value;
  out.constraint = a;
  out.infeasible = res.infeasible;
  out.intervened = res.u != ud;
  return out;
}

}  // namespace fwrta
