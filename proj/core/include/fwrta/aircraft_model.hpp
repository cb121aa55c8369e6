#pragma once

// 3D Dubins kinematics of a fixed-wing aircraft.
//
// State x = (n, e, d, phi, theta, psi, V_T), input u = (A_T, P, Q). The
// body yaw rate is not an input: coordinated flight ties it to the bank
// angle through R = (g_D / V_T) sin(phi) cos(theta).
//
// Two input orderings appear below and they are not interchangeable:
//   * u          = (A_T, P, Q)  drives the state equations,
//   * (A_T, Q, R)               is what the acceleration map M_a acts on.
// Use accel_coordinates() to go from the first to the second.

#include <cmath>
#include <numbers>

#include <Eigen/Core>
#include <Eigen/LU>

#include "fwrta/types.hpp"

namespace fwrta {

struct GravityParam {
  double g_D = 9.81;
};

/// Thresholds at which the kinematic model is treated as broken down.
struct ModelLimits {
  double min_speed = 1.0;       // m/s
  double pitch_margin = 1e-3;   // rad, distance from +-pi/2
};

template <typename T>
using InputMatrix = Eigen::Matrix<T, 7, 3>;

template <typename T>
void check_state(const BasicState<T>& x, const ModelLimits& limits = {}) {
  const double V = value_of(x.V_T);
  const double theta = value_of(x.theta);
  if (!std::isfinite(V) || !std::isfinite(theta) || !std::isfinite(value_of(x.phi)) ||
      !std::isfinite(value_of(x.psi)) || !std::isfinite(value_of(x.n)) ||
      !std::isfinite(value_of(x.e)) || !std::isfinite(value_of(x.d))) {
    throw RtaError(ErrorKind::InvalidParameter, "aircraft state has non-finite entries");
  }
  if (V <= limits.min_speed) {
    throw RtaError(ErrorKind::SingularSpeed,
                   "airspeed " + std::to_string(V) + " m/s at or below floor " +
                       std::to_string(limits.min_speed) + " m/s");
  }
  if (std::abs(theta) >= std::numbers::pi / 2 - limits.pitch_margin) {
    throw RtaError(ErrorKind::SingularPitch,
                   "pitch " + std::to_string(theta) + " rad too close to +-pi/2");
  }
}

/// Inertial velocity v(zeta) = V_T (c_theta c_psi, c_theta s_psi, -s_theta).
template <typename T>
Vec3<T> velocity(const BasicState<T>& x) {
  const T ct = cos(x.theta);
  return {x.V_T * ct * cos(x.psi), x.V_T * ct * sin(x.psi), -x.V_T * sin(x.theta)};
}

/// Coordinated-turn body yaw rate R.
template <typename T>
T turn_rate(const BasicState<T>& x, const GravityParam& g = {}, const ModelLimits& limits = {}) {
  if (value_of(x.V_T) <= limits.min_speed) {
    throw RtaError(ErrorKind::SingularSpeed, "turn rate undefined at airspeed " +
                                                 std::to_string(value_of(x.V_T)) + " m/s");
  }
  return g.g_D / x.V_T * sin(x.phi) * cos(x.theta);
}

/// Drift term f(x) of the control-affine form.
template <typename T>
Vec7<T> drift(const BasicState<T>& x, const GravityParam& g = {}) {
  const T sphi = sin(x.phi), cphi = cos(x.phi);
  const T sth = sin(x.theta), cth = cos(x.theta);
  const T k = g.g_D / x.V_T;
  const Vec3<T> v = velocity(x);
  Vec7<T> f;
  f << v(0), v(1), v(2), k * sphi * cphi * sth, -k * sphi * sphi * cth, k * sphi * cphi, T(0.0);
  return f;
}

/// Input matrix g(x); columns follow u = (A_T, P, Q).
template <typename T>
InputMatrix<T> input_matrix(const BasicState<T>& x) {
  const T sphi = sin(x.phi), cphi = cos(x.phi);
  const T cth = cos(x.theta);
  InputMatrix<T> G = InputMatrix<T>::Constant(T(0.0));
  G(3, 1) = T(1.0);
  G(3, 2) = sphi * tan(x.theta);
  G(4, 2) = cphi;
  G(5, 2) = sphi / cth;
  G(6, 0) = T(1.0);
  return G;
}

/// State derivative f(x) + g(x) u.
template <typename T>
Vec7<T> dynamics(const BasicState<T>& x, const BasicInput<T>& u, const GravityParam& g = {},
                 const ModelLimits& limits = {}) {
  check_state(x, limits);
  return drift(x, g) + input_matrix(x) * u.to_vector();
}

/// Acceleration map M_a: v_dot = M_a (A_T, Q, R).
template <typename T>
Mat3<T> accel_matrix(const BasicState<T>& x, const ModelLimits& limits = {}) {
  check_state(x, limits);
  const T sphi = sin(x.phi), cphi = cos(x.phi);
  const T sth = sin(x.theta), cth = cos(x.theta);
  const T spsi = sin(x.psi), cpsi = cos(x.psi);
  const T& V = x.V_T;
  Mat3<T> M;
  M << cth * cpsi, -V * (cphi * sth * cpsi + sphi * spsi), V * (sphi * sth * cpsi - cphi * spsi),
      cth * spsi, V * (-cphi * sth * spsi + sphi * cpsi), V * (sphi * sth * spsi + cphi * cpsi),
      -sth, -V * cphi * cth, V * sphi * cth;
  return M;
}

/// Body-to-earth rotation R_eb = Rz(psi) Ry(theta) Rx(phi).
template <typename T>
Mat3<T> body_to_earth(const BasicState<T>& x) {
  const T sphi = sin(x.phi), cphi = cos(x.phi);
  const T sth = sin(x.theta), cth = cos(x.theta);
  const T spsi = sin(x.psi), cpsi = cos(x.psi);
  Mat3<T> R;
  R << cpsi * cth, cpsi * sth * sphi - spsi * cphi, cpsi * sth * cphi + spsi * sphi,
      spsi * cth, spsi * sth * sphi + cpsi * cphi, spsi * sth * cphi - cpsi * sphi,
      -sth, cth * sphi, cth * cphi;
  return R;
}

/// M_a^{-1}, from the factorisation M_a = R_eb [[1,0,0],[0,0,V],[0,-V,0]].
template <typename T>
Mat3<T> accel_matrix_inverse(const BasicState<T>& x, const ModelLimits& limits = {}) {
  check_state(x, limits);
  const Mat3<T> Rt = body_to_earth(x).transpose();
  const T inv_V = 1.0 / x.V_T;
  Mat3<T> Minv;
  Minv.row(0) = Rt.row(0);
  Minv.row(1) = -inv_V * Rt.row(2);
  Minv.row(2) = inv_V * Rt.row(1);
  return Minv;
}

/// Third row of M_a^{-1}: maps an inertial acceleration to the turn rate R.
template <typename T>
RowVec3<T> w_R_row(const BasicState<T>& x, const ModelLimits& limits = {}) {
  return accel_matrix_inverse(x, limits).row(2);
}

/// Reorders u = (A_T, P, Q) plus a turn rate into the M_a argument (A_T, Q, R).
template <typename T>
Vec3<T> accel_coordinates(const BasicInput<T>& u, const T& R) {
  return {u.A_T, u.Q, R};
}

/// Inertial acceleration M_a (A_T, Q, R) with R from the coordinated-turn relation.
template <typename T>
Vec3<T> acceleration(const BasicState<T>& x, const BasicInput<T>& u, const GravityParam& g = {},
                     const ModelLimits& limits = {}) {
  return accel_matrix(x, limits) * accel_coordinates(u, turn_rate(x, g, limits));
}

}  // namespace fwrta
