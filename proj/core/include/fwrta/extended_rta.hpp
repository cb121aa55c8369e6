#pragma once

// Velocity-based extended barrier h_e = h_p + h_p_dot / gamma_p and the
// safety filter built on it. h_e depends on (r, v(zeta), t) only, so its
// derivative sees A_T and Q through the acceleration map but never P.

#include <vector>

#include "fwrta/aircraft_model.hpp"
#include "fwrta/constraints.hpp"
#include "fwrta/safety_filter.hpp"

namespace fwrta {

struct ExtendedParams {
  double gamma_p = 0.1;
  ClassKappaLinear alpha{0.1};
  WeightFactor W = WeightFactor::diagonal(6.0, 0.6, 0.1);
  FilterMode mode = FilterMode::hard();

  void validate() const;
};

template <typename T>
struct ExtendedEval {
  T value{};
  Vec3<T> grad_r = Vec3<T>::Constant(T(0.0));
  Vec3<T> grad_v = Vec3<T>::Constant(T(0.0));
  T dt_partial{};
  std::vector<T> per_constraint;
  std::vector<T> weights;
};

template <typename T>
ExtendedEval<T> h_e_member(const Vec3<T>& r, const Vec3<T>& v, const T& t,
                           const MovingObstacle& obs, double gamma_p) {
  const Vec3<T> delta = collision_offset(r, t, obs);
  const T dist = detail::norm(delta);
  const Vec3<T> n = delta / dist;
  const Vec3<T> v_i = obs.velocity_at(t);
  const Vec3<T> rel = v - v_i;
  const T n_rel = n.dot(rel);
  // d n / d r = (I - n n^T) / dist, d n / d t = -(I - n n^T) v_i / dist
  const Vec3<T> rel_perp = (rel - n * n_rel) / dist;
  const Vec3<T> vi_perp = (v_i - n * n.dot(v_i)) / dist;

  ExtendedEval<T> out;
  out.value = dist - obs.radius + n_rel / gamma_p;
  out.grad_r = n + rel_perp / gamma_p;
  out.grad_v = n / gamma_p;
  out.dt_partial = -n.dot(v_i) + (-vi_perp.dot(rel) - n.dot(obs.acceleration_at(t))) / gamma_p;
  return out;
}

template <typename T>
ExtendedEval<T> h_e_member(const Vec3<T>& r, const Vec3<T>& v, const T& /*t*/,
                           const GeofencePlane& plane, double gamma_p) {
  const Vec3<T> n = lift<T>(plane.normal);
  ExtendedEval<T> out;
  out.value = h_geofence(r, plane) + n.dot(v) / gamma_p;
  out.grad_r = n;
  out.grad_v = n / gamma_p;
  out.dt_partial = T(0.0);
  return out;
}

template <typename T>
ExtendedEval<T> h_e_member(const Vec3<T>& r, const Vec3<T>& v, const T& t, const Constraint& c,
                           double gamma_p) {
  return std::visit([&](const auto& member) { return h_e_member(r, v, t, member, gamma_p); }, c);
}

/// Softmin of the member extended barriers with weight-averaged derivatives.
template <typename T>
ExtendedEval<T> h_e_composed(const Vec3<T>& r, const Vec3<T>& v, const T& t,
                             const ConstraintSet& set, double gamma_p) {
  std::vector<ExtendedEval<T>> members;
  members.reserve(set.members.size());
  ExtendedEval<T> out;
  for (const Constraint& c : set.members) {
    members.push_back(h_e_member(r, v, t, c, gamma_p));
    out.per_constraint.push_back(members.back().value);
  }
  out.value = softmin<T>(out.per_constraint, set.kappa);
  out.weights = softmin_weights<T>(out.per_constraint, out.value, set.kappa);
  for (std::size_t i = 0; i < members.size(); ++i) {
    const T& w = out.weights[i];
    out.grad_r += w * members[i].grad_r;
    out.grad_v += w * members[i].grad_v;
    out.dt_partial += w * members[i].dt_partial;
  }
  return out;
}

/// h_e_dot(x, t, u) = drift + input_row . u with u = (A_T, P, Q).
template <typename T>
struct HdotAffine {
  T value{};  // h_e itself
  T drift{};
  RowVec3<T> input_row = RowVec3<T>::Constant(T(0.0));
};

template <typename T>
HdotAffine<T> hdot_e_affine(const BasicState<T>& x, const T& t, const ConstraintSet& set,
                            const ExtendedParams& params, const GravityParam& g = {},
                            const ModelLimits& limits = {}) {
  const Vec3<T> v = velocity(x);
  const ExtendedEval<T> he = h_e_composed(x.position(), v, t, set, params.gamma_p);
  const RowVec3<T> through_accel = he.grad_v.transpose() * accel_matrix(x, limits);
  HdotAffine<T> out;
  out.value = he.value;
  out.drift = he.grad_r.dot(v) + he.dt_partial + through_accel(2) * turn_rate(x, g, limits);
  out.input_row(0) = through_accel(0);
  out.input_row(1) = T(0.0);
  out.input_row(2) = through_accel(1);
  return out;
}

/// Extended-barrier RTA; the roll rate always passes through unchanged.
RtaOutput rta_extended(const AircraftState& x, double t, const ControlInput& u_d,
                       const ConstraintSet& set, const ExtendedParams& params,
                       const GravityParam& g = {}, const ModelLimits& limits = {});

}  // namespace fwrta
