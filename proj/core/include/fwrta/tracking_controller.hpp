#pragma once

// Velocity-tracking controller for the Dubins model, built by CLF backstepping.
//
// Step 1: a desired acceleration a_d = a_c + K_v (v_c - v) / 2 is converted
// through M_a^{-1} into A_T, Q and a desired turn rate R_d.
// Step 2: the roll rate P drives R towards R_d by enforcing
//   V_dot + lambda V <= 0,  V = |v_c - v|^2 / 2 + (R - R_d)^2 / (2 mu),
// which is affine in P: a_P + b_P P <= 0.
//
// The time derivatives of v_c, R and R_d along the closed loop come from
// forward-mode differentiation; the P-affine split is exact because a
// directional derivative is linear in the direction.

#include <variant>

#include "fwrta/aircraft_model.hpp"
#include "fwrta/constraints.hpp"
#include "fwrta/modelfree_rta.hpp"

namespace fwrta {

struct TrackingParams {
  Mat3d K_r = 0.05 * Mat3d::Identity();
  Mat3d K_v = 0.3 * Mat3d::Identity();
  double mu = 1e-5;
  double lambda = 0.2;

  /// Smallest eigenvalue of the symmetric part of K_v.
  double min_eigen_K_v() const;
  void validate() const;
};

/// Goal r_g(t) = r_0 + v_g t + a_g t^2 / 2.
struct GoalTrajectory {
  Vec3d origin = Vec3d::Zero();
  Vec3d velocity = Vec3d::Zero();
  Vec3d acceleration = Vec3d::Zero();

  template <typename T>
  Vec3<T> position_at(const T& t) const {
    return lift<T>(origin) + lift<T>(velocity) * t + lift<T>(acceleration) * (0.5 * t * t);
  }
  template <typename T>
  Vec3<T> velocity_at(const T& t) const {
    return lift<T>(velocity) + lift<T>(acceleration) * t;
  }
  template <typename T>
  Vec3<T> acceleration_at(const T& /*t*/) const {
    return lift<T>(acceleration);
  }
};

/// v_d(r, t) = v_g(t) + K_r (r_g(t) - r).
template <typename T>
Vec3<T> desired_velocity(const Vec3<T>& r, const T& t, const GoalTrajectory& goal,
                         const Mat3d& K_r) {
  return goal.velocity_at(t) + K_r.template cast<T>() * (goal.position_at(t) - r);
}

/// Total derivative of v_d along r_dot = v: a_g + K_r (v_g - v).
template <typename T>
Vec3<T> desired_velocity_rate(const Vec3<T>& v, const T& t, const GoalTrajectory& goal,
                              const Mat3d& K_r) {
  return goal.acceleration_at(t) + K_r.template cast<T>() * (goal.velocity_at(t) - v);
}

/// Command that tracks the goal trajectory directly.
struct DesiredVelocityCommand {
  const GoalTrajectory* goal = nullptr;
  Mat3d K_r = 0.05 * Mat3d::Identity();

  template <typename T>
  Vec3<T> operator()(const Vec3<T>& r, const T& t) const {
    return desired_velocity(r, t, *goal, K_r);
  }
};

/// Command that tracks the model-free safe velocity built around v_d.
struct SafeVelocityCommand {
  DesiredVelocityCommand desired;
  const ConstraintSet* set = nullptr;
  ModelFreeParams params;

  template <typename T>
  Vec3<T> operator()(const Vec3<T>& r, const T& t) const {
    return safe_velocity(r, t, desired(r, t), *set, params).v_s;
  }
};

using VelocityCommand = std::variant<DesiredVelocityCommand, SafeVelocityCommand>;

template <typename T>
Vec3<T> command_velocity(const VelocityCommand& cmd, const Vec3<T>& r, const T& t) {
  return std::visit([&](const auto& c) { return c(r, t); }, cmd);
}

/// a_c = d v_c / dt along r_dot = v, by forward-mode differentiation.
template <typename T>
Vec3<T> command_accel(const VelocityCommand& cmd, const Vec3<T>& r, const T& t,
                      const Vec3<T>& v) {
  using D = Dual<T>;
  Vec3<D> r_seed;
  for (int i = 0; i < 3; ++i) r_seed(i) = D(r(i), v(i));
  const Vec3<D> vc = command_velocity(cmd, r_seed, D(t, T(1.0)));
  return {vc(0).deriv, vc(1).deriv, vc(2).deriv};
}

/// a_d = a_c + K_v (v_c - v) / 2.
template <typename T>
Vec3<T> desired_accel(const BasicState<T>& x, const T& t, const VelocityCommand& cmd,
                      const TrackingParams& params) {
  const Vec3<T> r = x.position();
  const Vec3<T> v = velocity(x);
  const Vec3<T> v_c = command_velocity(cmd, r, t);
  const Vec3<T> a_c = command_accel(cmd, r, t, v);
  return a_c + 0.5 * (params.K_v.template cast<T>() * (v_c - v));
}

/// (A_T, Q, R_d) = M_a^{-1} a_d.
template <typename T>
Vec3<T> accel_to_inputs(const BasicState<T>& x, const Vec3<T>& a_d,
                        const ModelLimits& limits = {}) {
  return accel_matrix_inverse(x, limits) * a_d;
}

/// Desired turn rate R_d(x, t).
template <typename T>
T desired_turn_rate(const BasicState<T>& x, const T& t, const VelocityCommand& cmd,
                    const TrackingParams& params, const ModelLimits& limits = {}) {
  return w_R_row(x, limits).dot(desired_accel(x, t, cmd, params));
}

/// Backstepping CLF V = |v_c - v|^2 / 2 + (R - R_d)^2 / (2 mu).
template <typename T>
T clf_V(const BasicState<T>& x, const T& t, const VelocityCommand& cmd,
        const TrackingParams& params, const GravityParam& g = {},
        const ModelLimits& limits = {}) {
  const Vec3<T> e = command_velocity(cmd, x.position(), t) - velocity(x);
  const T gap = turn_rate(x, g, limits) - desired_turn_rate(x, t, cmd, params, limits);
  return 0.5 * e.dot(e) + gap * gap / (2.0 * params.mu);
}

/// Everything the tracking law computes in one evaluation.
struct TrackingTerms {
  Vec3d v_c = Vec3d::Zero();
  Vec3d a_c = Vec3d::Zero();
  Vec3d a_d = Vec3d::Zero();
  double A_T = 0.0;
  double Q = 0.0;
  double R = 0.0;
  double R_d = 0.0;
  double f_R = 0.0, g_R = 0.0;
  double f_Rd = 0.0, g_Rd = 0.0;
  double a_P = 0.0;
  double b_P = 0.0;
  double P = 0.0;
  double V0 = 0.0;  // |v_c - v|^2 / 2
  double V = 0.0;   // full backstepping CLF

  ControlInput input() const { return {A_T, P, Q}; }
};

/// Closed-form CLF-QP solution: 0 if b_P = 0, else min{0, -a_P} / b_P.
inline double roll_rate_from_coefficients(double a_P, double b_P) {
  if (b_P == 0.0) return 0.0;
  return std::min(0.0, -a_P) / b_P;
}

TrackingTerms tracking_terms(const AircraftState& x, double t, const VelocityCommand& cmd,
                             const TrackingParams& params, const GravityParam& g = {},
                             const ModelLimits& limits = {});

/// Roll rate P from the CLF-QP.
double roll_rate(const AircraftState& x, double t, const VelocityCommand& cmd,
                 const TrackingParams& params, const GravityParam& g = {},
                 const ModelLimits& limits = {});

/// Full tracking law u = (A_T, P, Q).
ControlInput track(const AircraftState& x, double t, const VelocityCommand& cmd,
                   const TrackingParams& params, const GravityParam& g = {},
                   const ModelLimits& limits = {});

}  // namespace fwrta
