#pragma once

// Backstepping barrier for the roll cascade.
//
// The extended barrier is filtered (smoothly) at the acceleration level to
// get a safe acceleration a_s, which maps to a safe turn rate R_s through
// the last row of M_a^{-1}. Penalising R - R_s gives
//
//   h_b(x, t) = h_e(r, v(zeta), t) - (R_s - R)^2 / (2 mu_e),
//
// whose derivative involves P. Its gradient is taken by forward-mode
// differentiation through the whole chain.

#include <Eigen/Core>

#include "fwrta/aircraft_model.hpp"
#include "fwrta/constraints.hpp"
#include "fwrta/extended_rta.hpp"
#include "fwrta/safety_filter.hpp"

namespace fwrta {

struct BacksteppingParams {
  ClassKappaLinear alpha_e{0.1};
  WeightFactor W_e = WeightFactor::identity();
  double nu_e = 1.0;
  double mu_e = 1e-4;
  double gamma_p = 0.1;
  ClassKappaLinear alpha{0.1};
  WeightFactor W = WeightFactor::diagonal(6.0, 0.6, 0.1);
  FilterMode mode = FilterMode::hard();

  void validate() const;
};

template <typename T>
struct SafeAccel {
  Vec3<T> a_s = Vec3<T>::Constant(T(0.0));
  T a_e{};
  RowVec3<T> b_e = RowVec3<T>::Constant(T(0.0));
  T h_e{};
};

/// Smoothly filtered acceleration for zero desired acceleration.
template <typename T>
SafeAccel<T> safe_accel(const BasicState<T>& x, const T& t, const ConstraintSet& set,
                        const BacksteppingParams& params) {
  const Vec3<T> v = velocity(x);
  const ExtendedEval<T> he = h_e_composed(x.position(), v, t, set, params.gamma_p);
  const Mat3<T> W_e = params.W_e.W.template cast<T>();
  SafeAccel<T> out;
  out.h_e = he.value;
  out.a_e = he.grad_r.dot(v) + he.dt_partial + params.alpha_e(he.value);
  out.b_e = he.grad_v.transpose() * W_e;
  const T b_norm = sqrt(out.b_e.dot(out.b_e));
  if (b_norm == 0.0) return out;
  out.a_s = lambda_smooth(out.a_e, b_norm, params.nu_e) * (W_e * out.b_e.transpose());
  return out;
}

/// R_s = (third row of M_a^{-1}) a_s.
template <typename T>
T safe_turn_rate(const BasicState<T>& x, const T& t, const ConstraintSet& set,
                 const BacksteppingParams& params, const ModelLimits& limits = {}) {
  return w_R_row(x, limits).dot(safe_accel(x, t, set, params).a_s);
}

template <typename T>
struct BacksteppingEval {
  T h_b{};
  T h_e{};
  T R_s{};
  T R{};
  T a_e{};
};

template <typename T>
BacksteppingEval<T> evaluate_h_b(const BasicState<T>& x, const T& t, const ConstraintSet& set,
                                 const BacksteppingParams& params, const GravityParam& g = {},
                                 const ModelLimits& limits = {}) {
  const SafeAccel<T> sa = safe_accel(x, t, set, params);
  BacksteppingEval<T> out;
  out.h_e = sa.h_e;
  out.a_e = sa.a_e;
  out.R_s = w_R_row(x, limits).dot(sa.a_s);
  out.R = turn_rate(x, g, limits);
  const T gap = out.R_s - out.R;
  out.h_b = out.h_e - gap * gap / (2.0 * params.mu_e);
  return out;
}

template <typename T>
T h_b(const BasicState<T>& x, const T& t, const ConstraintSet& set,
      const BacksteppingParams& params, const GravityParam& g = {},
      const ModelLimits& limits = {}) {
  return evaluate_h_b(x, t, set, params, g, limits).h_b;
}

/// Value and exact first derivatives of a scalar function of (x, t).
struct BarrierGradient {
  double value = 0.0;
  Eigen::Matrix<double, 1, 7> dx = Eigen::Matrix<double, 1, 7>::Zero();
  double dt = 0.0;
};

BarrierGradient grad_h_b(const AircraftState& x, double t, const ConstraintSet& set,
                         const BacksteppingParams& params, const GravityParam& g = {},
                         const ModelLimits& limits = {});

/// Backstepping RTA; all three input channels may be modified.
RtaOutput rta_backstepping(const AircraftState& x, double t, const ControlInput& u_d,
                           const ConstraintSet& set, const BacksteppingParams& params,
                           const GravityParam& g = {}, const ModelLimits& limits = {});

}  // namespace fwrta
