#pragma once

// Random aircraft states stratified by distance to a constraint set.

#include <cmath>
#include <numbers>
#include <random>
#include <string>
#include <vector>

#include "fwrta/constraints.hpp"
#include "gradients.hpp"

namespace fwrta::testing {

struct SampledState {
  AircraftState x;
  double t = 0.0;
  std::string stratum;
};

inline Vec3d random_unit(std::mt19937_64& rng) {
  std::normal_distribution<double> n(0.0, 1.0);
  Vec3d v(n(rng), n(rng), n(rng));
  return v.normalized();
}

/// Places the aircraft at distance ~`gap` outside a randomly chosen member.
inline Vec3d position_near(const ConstraintSet& set, double t, double gap, std::mt19937_64& rng) {
  std::uniform_int_distribution<std::size_t> pick(0, set.members.size() - 1);
  const Constraint& c = set.members[pick(rng)];
  if (const auto* obs = std::get_if<MovingObstacle>(&c)) {
    return obs->position_at(t) + random_unit(rng) * (obs->radius + gap);
  }
  const auto& plane = std::get<GeofencePlane>(c);
  Vec3d tangent = random_unit(rng);
  tangent -= plane.normal * plane.normal.dot(tangent);
  return plane.point + plane.normal * (plane.margin + gap) +
         tangent.normalized() * uniform(rng, -2000.0, 2000.0);
}

/// Strata: far, mid and near the boundary; "approach" points the velocity at the
/// nearest constraint so the filters sit close to their activation threshold.
inline std::vector<SampledState> stratified_states(const ConstraintSet& set, int count,
                                                   std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  const char* names[] = {"far", "mid", "near", "approach"};
  const double lo[] = {500.0, 50.0, 1.0, 5.0};
  const double hi[] = {3000.0, 500.0, 50.0, 300.0};
  std::vector<SampledState> out;
  for (int i = 0; i < count; ++i) {
    const int s = i % 4;
    SampledState st;
    st.stratum = names[s];
    st.t = uniform(rng, 0.0, 40.0);
    const Vec3d r = position_near(set, st.t, uniform(rng, lo[s], hi[s]), rng);
    st.x.n = r(0);
    st.x.e = r(1);
    st.x.d = r(2);
    st.x.phi = uniform(rng, -0.8, 0.8);
    st.x.theta = uniform(rng, -0.4, 0.4);
    st.x.psi = uniform(rng, -std::numbers::pi, std::numbers::pi);
    st.x.V_T = uniform(rng, 80.0, 220.0);
    if (s == 3) {
      const Vec3d g = compose_h_p(r, st.t, set).gradient_r;
      const Vec3d toward = -g.normalized();
      st.x.psi = std::atan2(toward(1), toward(0)) + uniform(rng, -0.3, 0.3);
      st.x.theta = std::clamp(std::asin(-toward(2)), -0.4, 0.4);
      st.x.V_T = uniform(rng, 20.0, 80.0);
    }
    out.push_back(st);
  }
  return out;
}

}  // namespace fwrta::testing
