#pragma once

#include <stdexcept>
#include <string>

#include <Eigen/Core>

#include "fwrta/dual.hpp"

namespace fwrta {

template <typename T>
using Vec3 = Eigen::Matrix<T, 3, 1>;
template <typename T>
using RowVec3 = Eigen::Matrix<T, 1, 3>;
template <typename T>
using Mat3 = Eigen::Matrix<T, 3, 3>;
template <typename T>
using Vec7 = Eigen::Matrix<T, 7, 1>;

using Vec3d = Vec3<double>;
using Mat3d = Mat3<double>;

enum class ErrorKind {
  SingularSpeed,
  SingularPitch,
  CoincidentPosition,
  ZeroDesiredVelocity,
  InvalidGainOrdering,
  InvalidParameter,
};

const char* to_string(ErrorKind kind);

/// Numerical or domain failure raised by the model, barrier and filter layers.
class RtaError : public std::runtime_error {
 public:
  RtaError(ErrorKind kind, const std::string& what) : std::runtime_error(what), kind_(kind) {}
  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

/// 3D Dubins state x = (n, e, d, phi, theta, psi, V_T).
///
/// Positions are north/east/down in metres, angles in radians (kept
/// unwrapped during a run), speed in m/s.
template <typename T>
struct BasicState {
  T n{}, e{}, d{};
  T phi{}, theta{}, psi{};
  T V_T{};

  Vec3<T> position() const { return {n, e, d}; }

  Vec7<T> to_vector() const {
    Vec7<T> x;
    x << n, e, d, phi, theta, psi, V_T;
    return x;
  }

  static BasicState from_vector(const Vec7<T>& x) {
    return {x(0), x(1), x(2), x(3), x(4), x(5), x(6)};
  }
};

/// Control input u = (A_T, P, Q): longitudinal acceleration, roll rate, pitch rate.
template <typename T>
struct BasicInput {
  T A_T{}, P{}, Q{};

  Vec3<T> to_vector() const { return {A_T, P, Q}; }
  static BasicInput from_vector(const Vec3<T>& u) { return {u(0), u(1), u(2)}; }
};

using AircraftState = BasicState<double>;
using ControlInput = BasicInput<double>;

/// Lifts a double-valued state into a scalar type T (derivative parts zero).
template <typename T>
BasicState<T> lift(const AircraftState& x) {
  return {T(x.n), T(x.e), T(x.d), T(x.phi), T(x.theta), T(x.psi), T(x.V_T)};
}

template <typename T>
Vec3<T> lift(const Vec3d& v) {
  return {T(v(0)), T(v(1)), T(v(2))};
}

template <typename T>
Vec3d values_of(const Vec3<T>& v) {
  return {value_of(v(0)), value_of(v(1)), value_of(v(2))};
}

}  // namespace fwrta
