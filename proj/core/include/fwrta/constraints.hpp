#pragma once

// Position-based barrier candidates and their smooth composition.
//
// Every member h_i(r, t) is reported with its gradient in r and its
// partial derivative in t, so a composed barrier can be differentiated
// along any velocity without finite differences.

#include <algorithm>
#include <cmath>
#include <span>
#include <variant>
#include <vector>

#include "fwrta/types.hpp"

namespace fwrta {

/// Intruder on a constant-acceleration path r_i(t) = c + v t + a t^2 / 2.
struct MovingObstacle {
  Vec3d origin = Vec3d::Zero();
  Vec3d velocity = Vec3d::Zero();
  Vec3d acceleration = Vec3d::Zero();
  double radius = 1.0;

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

/// Planar fence: the aircraft must stay on the side the unit normal points to.
struct GeofencePlane {
  Vec3d point = Vec3d::Zero();
  Vec3d normal = Vec3d::UnitX();
  double margin = 0.0;

  /// Builds a plane from any nonzero normal direction.
  static GeofencePlane from_direction(const Vec3d& point, const Vec3d& direction, double margin);
};

using Constraint = std::variant<MovingObstacle, GeofencePlane>;

/// Constraints linked with AND logic and merged with smoothing parameter kappa (1/m).
struct ConstraintSet {
  std::vector<Constraint> members;
  double kappa = 0.007;

  void validate() const;
};

/// One member barrier with its first derivatives.
template <typename T>
struct MemberEval {
  T value{};
  Vec3<T> grad_r = Vec3<T>::Constant(T(0.0));
  T dt_partial{};
};

/// Composed barrier and the quantities needed to differentiate it.
template <typename T>
struct BarrierEval {
  T value{};
  Vec3<T> gradient_r = Vec3<T>::Constant(T(0.0));
  T dt_partial{};
  std::vector<T> per_constraint;
  std::vector<T> weights;
};

inline constexpr double kCoincidenceTolerance = 1e-9;

namespace detail {
template <typename T>
T norm(const Vec3<T>& v) {
  return sqrt(v.dot(v));
}
}  // namespace detail

template <typename T>
Vec3<T> collision_offset(const Vec3<T>& r, const T& t, const MovingObstacle& obs) {
  Vec3<T> delta = r - obs.position_at(t);
  if (std::sqrt(value_of(delta.dot(delta))) < kCoincidenceTolerance) {
    throw RtaError(ErrorKind::CoincidentPosition, "aircraft coincides with obstacle centre");
  }
  return delta;
}

/// Signed clearance to a moving obstacle: ||r - r_i(t)|| - rho_i.
template <typename T>
T h_collision(const Vec3<T>& r, const T& t, const MovingObstacle& obs) {
  return detail::norm(collision_offset(r, t, obs)) - obs.radius;
}

/// Unit vector from the obstacle to the aircraft; the gradient of h_collision.
template <typename T>
Vec3<T> grad_collision(const Vec3<T>& r, const T& t, const MovingObstacle& obs) {
  Vec3<T> delta = collision_offset(r, t, obs);
  return delta / detail::norm(delta);
}

template <typename T>
T hdot_collision(const Vec3<T>& r, const T& t, const Vec3<T>& v, const MovingObstacle& obs) {
  return grad_collision(r, t, obs).dot(v - obs.velocity_at(t));
}

template <typename T>
T h_geofence(const Vec3<T>& r, const GeofencePlane& plane) {
  return lift<T>(plane.normal).dot(r - lift<T>(plane.point)) - plane.margin;
}

template <typename T>
T hdot_geofence(const Vec3<T>& v, const GeofencePlane& plane) {
  return lift<T>(plane.normal).dot(v);
}

template <typename T>
MemberEval<T> evaluate_member(const Vec3<T>& r, const T& t, const MovingObstacle& obs) {
  Vec3<T> delta = collision_offset(r, t, obs);
  T dist = detail::norm(delta);
  Vec3<T> n = delta / dist;
  return {dist - obs.radius, n, -n.dot(obs.velocity_at(t))};
}

template <typename T>
MemberEval<T> evaluate_member(const Vec3<T>& r, const T& /*t*/, const GeofencePlane& plane) {
  return {h_geofence(r, plane), lift<T>(plane.normal), T(0.0)};
}

template <typename T>
MemberEval<T> evaluate_member(const Vec3<T>& r, const T& t, const Constraint& c) {
  return std::visit([&](const auto& member) { return evaluate_member(r, t, member); }, c);
}

/// Smooth minimum -(1/kappa) ln sum exp(-kappa h_i), shifted by the smallest element.
template <typename T>
T softmin(std::span<const T> values, double kappa) {
  auto lowest = std::min_element(values.begin(), values.end(),
                                 [](const T& a, const T& b) { return value_of(a) < value_of(b); });
  const T& m = *lowest;
  T sum(0.0);
  for (const T& h : values) sum += exp(-kappa * (h - m));
  return m - log(sum) / kappa;
}

/// Smooth maximum (1/kappa) ln sum exp(kappa h_i), shifted by the largest element.
template <typename T>
T softmax(std::span<const T> values, double kappa) {
  auto highest = std::max_element(values.begin(), values.end(),
                                  [](const T& a, const T& b) { return value_of(a) < value_of(b); });
  const T& m = *highest;
  T sum(0.0);
  for (const T& h : values) sum += exp(kappa * (h - m));
  return m + log(sum) / kappa;
}

inline double softmin(std::span<const double> values, double kappa) {
  return softmin<double>(values, kappa);
}
inline double softmax(std::span<const double> values, double kappa) {
  return softmax<double>(values, kappa);
}

/// Softmin weights exp(-kappa (h_i - h)); they sum to one.
template <typename T>
std::vector<T> softmin_weights(std::span<const T> values, const T& composed, double kappa) {
  std::vector<T> w;
  w.reserve(values.size());
  for (const T& h : values) w.push_back(exp(-kappa * (h - composed)));
  return w;
}

/// Composed position barrier h_p with weight-averaged derivatives.
template <typename T>
BarrierEval<T> compose_h_p(const Vec3<T>& r, const T& t, const ConstraintSet& set) {
  std::vector<MemberEval<T>> members;
  members.reserve(set.members.size());
  BarrierEval<T> out;
  out.per_constraint.reserve(set.members.size());
  for (const Constraint& c : set.members) {
    members.push_back(evaluate_member(r, t, c));
    out.per_constraint.push_back(members.back().value);
  }
  out.value = softmin<T>(out.per_constraint, set.kappa);
  out.weights = softmin_weights<T>(out.per_constraint, out.value, set.kappa);
  for (std::size_t i = 0; i < members.size(); ++i) {
    out.gradient_r += out.weights[i] * members[i].grad_r;
    out.dt_partial += out.weights[i] * members[i].dt_partial;
  }
  return out;
}

}  // namespace fwrta
