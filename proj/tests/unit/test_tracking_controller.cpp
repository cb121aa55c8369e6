#include <gtest/gtest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "fwrta/tracking_controller.hpp"
#include "support/gradients.hpp"
#include "support/oracles.hpp"
#include "support/states.hpp"

using namespace fwrta;
using fwrta::testing::uniform;

namespace {

GoalTrajectory eastbound() {
  GoalTrajectory g;
  g.velocity = Vec3d(0, 161.32, 0);
  return g;
}

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

AircraftState random_state(std::mt19937_64& rng) {
  return {uniform(rng, -500, 500), uniform(rng, -500, 500), uniform(rng, -100, 100),
          uniform(rng, -0.8, 0.8),  uniform(rng, -0.4, 0.4),  uniform(rng, -3, 3),
          uniform(rng, 80, 220)};
}

// d/ds of clf_V along x_dot = f(x) + g(x) u and t_dot = 1.
double clf_rate(const AircraftState& x, double t, const ControlInput& u, const VelocityCommand& cmd,
                const TrackingParams& params) {
  using D = Dual<double>;
  const Vec7<double> xdot = dynamics(x, u);
  Vec7<D> xd;
  for (int k = 0; k < 7; ++k) xd(k) = D(x.to_vector()(k), xdot(k));
  return clf_V(BasicState<D>::from_vector(xd), D(t, 1.0), cmd, params).deriv;
}

}  // namespace

TEST(DesiredVelocity, ZeroPositionError) {
  const GoalTrajectory g = eastbound();
  const Mat3d K = 0.05 * Mat3d::Identity();
  EXPECT_EQ(desired_velocity<double>(g.position_at(7.0), 7.0, g, K), g.velocity);
}

TEST(DesiredAccel, Examples) {
  const GoalTrajectory g = eastbound();
  const TrackingParams params;
  const VelocityCommand cmd = DesiredVelocityCommand{&g, params.K_r};
  AircraftState x{0, 0, 0, 0, 0, std::numbers::pi / 2, 161.32};
  EXPECT_LE(desired_accel<double>(x, 0.0, cmd, params).norm(), 1e-12);
  // Goal 20 m north: v_c - v = K_r (20, 0, 0) = (1, 0, 0) and a_c = K_r (v_g - v) = 0.
  x.n = -20.0;
  const Vec3d a_d = desired_accel<double>(x, 0.0, cmd, params);
  EXPECT_NEAR(a_d(0), 0.15, 1e-12);
  EXPECT_NEAR(a_d(1), 0.0, 1e-12);
  EXPECT_NEAR(a_d(2), 0.0, 1e-12);
}

TEST(AccelToInputs, Examples) {
  const AircraftState x{0, 0, 0, 0, 0, std::numbers::pi / 2, 150.0};
  EXPECT_EQ(accel_to_inputs<double>(x, Vec3d::Zero()), Vec3d::Zero());
  // Flying east, a northward (left) push is a left turn: R_d < 0.
  const Vec3d in = accel_to_inputs<double>(x, Vec3d(-2.0, 0, 0));
  EXPECT_NEAR(in(0), 0.0, 1e-14);
  EXPECT_NEAR(in(1), 0.0, 1e-14);
  EXPECT_NEAR(in(2), 2.0 / 150.0, 1e-14);
  const Vec3d left = accel_to_inputs<double>(x, Vec3d(2.0, 0, 0));
  EXPECT_LT(left(2), 0.0);
}

TEST(RollRate, ClosedFormMatchesOracle) {
  EXPECT_EQ(roll_rate_from_coefficients(1.0, 2.0), -0.5);
  EXPECT_EQ(roll_rate_from_coefficients(-1.0, 2.0), 0.0);
  EXPECT_EQ(roll_rate_from_coefficients(3.0, 0.0), 0.0);
  std::mt19937_64 rng(71);
  for (int i = 0; i < 10000; ++i) {
    const double a = uniform(rng, -10, 10), b = uniform(rng, -10, 10);
    const double P = roll_rate_from_coefficients(a, b);
    EXPECT_NEAR(P, oracle::roll_rate_1d(a, b), 1e-12);
    EXPECT_LE(a + b * P, 1e-12 * std::max(1.0, std::abs(a)));
  }
}

TEST(Track, EquilibriumGivesZeroInput) {
  const GoalTrajectory g = eastbound();
  const TrackingParams params;
  const AircraftState x{0, 161.32 * 4, 0, 0, 0, std::numbers::pi / 2, 161.32};
  const VelocityCommand cmd = DesiredVelocityCommand{&g, params.K_r};
  const TrackingTerms tt = tracking_terms(x, 4.0, cmd, params);
  EXPECT_NEAR(tt.V, 0.0, 1e-20);
  // R_d is zero up to rounding, so a_P and P are too.
  EXPECT_LE(tt.a_P, 1e-20);
  EXPECT_LE(std::abs(tt.P), 1e-12);
  EXPECT_LE(tt.input().to_vector().norm(), 1e-12);
}

TEST(Track, LyapunovRateIdentity) {
  // Along the closed loop V_dot + lambda V = a_P + b_P P <= 0.
  const GoalTrajectory g = eastbound();
  const ConstraintSet s = mixed();
  const TrackingParams params;
  std::mt19937_64 rng(72);
  const VelocityCommand plain = DesiredVelocityCommand{&g, params.K_r};
  const VelocityCommand safe = SafeVelocityCommand{{&g, params.K_r}, &s, ModelFreeParams{}};
  for (const VelocityCommand& cmd : {plain, safe}) {
    for (int i = 0; i < 500; ++i) {
      const AircraftState x = random_state(rng);
      const double t = uniform(rng, 0, 30);
      const TrackingTerms tt = tracking_terms(x, t, cmd, params);
      const double rate = clf_rate(x, t, tt.input(), cmd, params);
      const double scale = std::max({1.0, std::abs(tt.a_P), params.lambda * tt.V});
      EXPECT_NEAR(rate + params.lambda * tt.V, tt.a_P + tt.b_P * tt.P, 1e-8 * scale);
      EXPECT_LE(tt.a_P + tt.b_P * tt.P, 1e-9 * scale);
      EXPECT_NEAR(tt.V, clf_V<double>(x, t, cmd, params), 1e-9 * std::max(1.0, tt.V));
    }
  }
}

TEST(Track, CommandAccelerationMatchesFiniteDifference) {
  const GoalTrajectory g = eastbound();
  const ConstraintSet s = mixed();
  const TrackingParams params;
  const VelocityCommand cmd = SafeVelocityCommand{{&g, params.K_r}, &s, ModelFreeParams{}};
  for (const auto& st : fwrta::testing::stratified_states(s, 400, 73)) {
    const Vec3d r = st.x.position(), v = velocity(st.x);
    const Vec3d a_c = command_accel<double>(cmd, r, st.t, v);
    for (int k = 0; k < 3; ++k) {
      const double fd = oracle::central_diff(
          [&](double e) { return command_velocity<double>(cmd, r + e * v, st.t + e)(k); }, 0.0,
          1e-4);
      EXPECT_NEAR(a_c(k), fd, 1e-4 * std::max(1.0, std::abs(fd))) << st.stratum;
    }
  }
}

TEST(TrackingParams, Validation) {
  TrackingParams p;
  EXPECT_NO_THROW(p.validate());
  EXPECT_DOUBLE_EQ(p.min_eigen_K_v(), 0.3);
  p.lambda = 0.31;
  try {
    p.validate();
    FAIL();
  } catch (const RtaError& e) {
    EXPECT_EQ(e.kind(), ErrorKind::InvalidGainOrdering);
  }
  p = TrackingParams{};
  p.mu = 0.0;
  EXPECT_THROW(p.validate(), RtaError);
}
