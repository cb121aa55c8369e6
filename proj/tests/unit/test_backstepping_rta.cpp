#include <gtest/gtest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "fwrta/backstepping_rta.hpp"
#include "support/gradients.hpp"
#include "support/oracles.hpp"
#include "support/states.hpp"

using namespace fwrta;
using fwrta::testing::uniform;

namespace {

ConstraintSet mixed() {
  MovingObstacle o;
  o.origin = Vec3d(-3048, 0, 0);
  o.velocity = Vec3d(121.92, 161.32, 0);
  o.radius = 30;
  ConstraintSet s;
  s.members = {o, GeofencePlane::from_direction(Vec3d(0, 11901, 0), Vec3d(-4, -1, 0), 15),
               GeofencePlane::from_direction(Vec3d(0, 11901, 0), Vec3d(-2, -1, 0), 15)};
  return s;
}

}  // namespace

TEST(SafeAccel, SatisfiesAccelerationLevelCondition) {
  const ConstraintSet s = mixed();
  const BacksteppingParams params;
  for (const auto& st : fwrta::testing::stratified_states(s, 2000, 51)) {
    const SafeAccel<double> sa = safe_accel<double>(st.x, st.t, s, params);
    const ExtendedEval<double> he =
        h_e_composed<double>(st.x.position(), velocity(st.x), st.t, s, params.gamma_p);
    EXPECT_GE(sa.a_e + he.grad_v.dot(sa.a_s), -1e-9 * std::max(1.0, std::abs(sa.a_e)))
        << st.stratum;
  }
}

TEST(SafeAccel, ExponentiallySmallWhenSafe) {
  const ConstraintSet s = mixed();
  const BacksteppingParams params;
  for (const auto& st : fwrta::testing::stratified_states(s, 400, 52)) {
    const SafeAccel<double> sa = safe_accel<double>(st.x, st.t, s, params);
    const double bn = sa.b_e.norm();
    if (sa.a_e <= 0.0 || bn == 0.0) continue;
    const double bound = std::exp(-params.nu_e * sa.a_e / bn) / params.nu_e;
    if (bound < 1e-250) continue;  // components are subnormal, relative bounds lose meaning
    EXPECT_LE(sa.a_s.stableNorm(), bound * (1 + 1e-9));
  }
}

TEST(SafeTurnRate, ZeroAccelerationGivesZero) {
  const AircraftState x{0, 0, 0, 0.3, 0.1, 1.0, 120};
  EXPECT_EQ(w_R_row(x).dot(Vec3d::Zero()), 0.0);
}

TEST(BacksteppingBarrier, NeverExceedsExtendedBarrier) {
  const ConstraintSet s = mixed();
  const BacksteppingParams params;
  for (const auto& st : fwrta::testing::stratified_states(s, 10000, 53)) {
    const BacksteppingEval<double> e = evaluate_h_b<double>(st.x, st.t, s, params);
    EXPECT_LE(e.h_b, e.h_e);
  }
}

TEST(BacksteppingBarrier, LargePenaltyScaleRecoversExtendedBarrier) {
  const ConstraintSet s = mixed();
  BacksteppingParams params;
  params.mu_e = 1e12;
  for (const auto& st : fwrta::testing::stratified_states(s, 200, 54)) {
    const BacksteppingEval<double> e = evaluate_h_b<double>(st.x, st.t, s, params);
    EXPECT_NEAR(e.h_b, e.h_e, 1e-9 * std::max(1.0, std::abs(e.h_e)));
  }
}

TEST(BacksteppingBarrier, GradientMatchesFiniteDifferences) {
  const ConstraintSet s = mixed();
  const BacksteppingParams params;
  auto f = [&](const auto& x, const auto& t) { return h_b(x, t, s, params); };
  for (const auto& st : fwrta::testing::stratified_states(s, 100, 55)) {
    const BarrierGradient g = grad_h_b(st.x, st.t, s, params);
    fwrta::testing::Grad8 ad;
    ad << g.dx, g.dt;
    const fwrta::testing::Grad8 fd = fwrta::testing::fd_gradient(f, st.x.to_vector(), st.t);
    EXPECT_LE(fwrta::testing::relative_error(ad, fd), 1e-5) << st.stratum;
    EXPECT_DOUBLE_EQ(g.value, h_b(st.x, st.t, s, params));
  }
}

TEST(BacksteppingBarrier, RollChannelIsLive) {
  const ConstraintSet s = mixed();
  const BacksteppingParams params;
  int nonzero = 0, total = 0;
  for (const auto& st : fwrta::testing::stratified_states(s, 200, 56)) {
    if (st.stratum != "approach") continue;
    ++total;
    if (std::abs(grad_h_b(st.x, st.t, s, params).dx(3)) > 1e-12) ++nonzero;
  }
  EXPECT_GT(total, 0);
  EXPECT_EQ(nonzero, total);
}

TEST(RtaBackstepping, TransparentFarAway) {
  const ConstraintSet s = mixed();
  const BacksteppingParams params;
  const AircraftState x{-20000, 0, 0, 0, 0, std::numbers::pi, 150};  // heading away
  const ControlInput u_d{1.0, 0.2, -0.1};
  const RtaOutput out = rta_backstepping(x, 0.0, u_d, s, params);
  EXPECT_GT(out.constraint, 0.0);
  EXPECT_EQ(out.u.to_vector(), u_d.to_vector());
  EXPECT_FALSE(out.intervened);
}

TEST(RtaBackstepping, FilteredInputMeetsBarrierCondition) {
  const ConstraintSet s = mixed();
  const BacksteppingParams params;
  std::mt19937_64 rng(57);
  int engaged = 0;
  for (const auto& st : fwrta::testing::stratified_states(s, 400, 58)) {
    const ControlInput u_d{uniform(rng, -20, 20), uniform(rng, -2, 2), uniform(rng, -1, 1)};
    const RtaOutput out = rta_backstepping(st.x, st.t, u_d, s, params);
    if (out.infeasible) continue;
    const BarrierGradient g = grad_h_b(st.x, st.t, s, params);
    const Vec7<double> xdot = dynamics(st.x, out.u);
    const double residual = g.dt + g.dx.dot(xdot.transpose()) + params.alpha(g.value);
    EXPECT_GE(residual, -1e-6 * std::max(1.0, std::abs(out.constraint))) << st.stratum;
    if (out.u.P != u_d.P) ++engaged;
  }
  EXPECT_GT(engaged, 0);
}
