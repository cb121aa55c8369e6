#pragma once

// Model-free RTA: filter the commanded velocity instead of the inputs.
//
// The safe velocity treats r_dot = v as the plant and enforces
//   h_p_dot(r, t, v_s) >= -gamma_p h_p + sigma ||dh_p/dr||^2
// through a smooth filter with anisotropic weights around v_d. A tracking
// controller with a Lyapunov certificate then keeps h_V >= 0.

#include <cmath>

#include "fwrta/constraints.hpp"
#include "fwrta/safety_filter.hpp"

namespace fwrta {

struct ModelFreeParams {
  double gamma_p = 0.1;
  double sigma = 3.0;
  double Gamma_v = 4.0;
  double nu_v = 0.007;

  void validate() const;
};

inline constexpr double kMinDesiredSpeed = 1e-6;

/// W_v = P_v + (I - P_v) / sqrt(Gamma_v), P_v the projector onto v_d.
template <typename T>
Mat3<T> velocity_weights(const Vec3<T>& v_d, double Gamma_v) {
  const T speed_sq = v_d.dot(v_d);
  if (std::sqrt(value_of(speed_sq)) < kMinDesiredSpeed) {
    throw RtaError(ErrorKind::ZeroDesiredVelocity, "desired velocity is (numerically) zero");
  }
  const Mat3<T> P = v_d * v_d.transpose() / speed_sq;
  const Mat3<T> I = Mat3<T>::Identity();
  return P + (I - P) * T(1.0 / std::sqrt(Gamma_v));
}

template <typename T>
struct SafeVelocityResult {
  Vec3<T> v_s = Vec3<T>::Constant(T(0.0));
  T a_v{};
  RowVec3<T> b_v = RowVec3<T>::Constant(T(0.0));
  /// h_p_dot(v_s) + gamma_p h_p - sigma ||grad h_p||^2; nonnegative when b_v != 0.
  T margin{};
  T h_p{};
};

template <typename T>
SafeVelocityResult<T> safe_velocity(const Vec3<T>& r, const T& t, const Vec3<T>& v_d,
                                    const ConstraintSet& set, const ModelFreeParams& params) {
  const BarrierEval<T> hp = compose_h_p(r, t, set);
  const Mat3<T> W_v = velocity_weights(v_d, params.Gamma_v);
  const T grad_sq = hp.gradient_r.dot(hp.gradient_r);
  SafeVelocityResult<T> out;
  out.h_p = hp.value;
  out.a_v = hp.gradient_r.dot(v_d) + hp.dt_partial + params.gamma_p * hp.value -
            params.sigma * grad_sq;
  out.b_v = hp.gradient_r.transpose() * W_v;
  const T b_norm = sqrt(out.b_v.dot(out.b_v));
  out.v_s = v_d;
  if (!(b_norm == 0.0)) {
    out.v_s += lambda_smooth(out.a_v, b_norm, params.nu_v) * (W_v * out.b_v.transpose());
  }
  out.margin = hp.gradient_r.dot(out.v_s) + hp.dt_partial + params.gamma_p * hp.value -
               params.sigma * grad_sq;
  return out;
}

/// Tracking-coupled barrier h_V = h_p - V / (2 sigma (lambda - gamma_p)).
double h_V(double h_p, double V_lyap, const ModelFreeParams& params, double lambda);

}  // namespace fwrta
