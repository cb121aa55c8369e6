#include <benchmark/benchmark.h>

#include <numbers>

#include "fwrta/backstepping_rta.hpp"
#include "fwrta/extended_rta.hpp"
#include "fwrta/sim/simulator.hpp"
#include "fwrta/tracking_controller.hpp"

using namespace fwrta;

namespace {

ConstraintSet three_constraints() {
  MovingObstacle o;
  o.origin = Vec3d(-3048, 0, 0);
  o.velocity = Vec3d(121.92, 161.32, 0);
  o.radius = 30;
  ConstraintSet s;
  s.members = {o, GeofencePlane::from_direction(Vec3d(0, 11901, 0), Vec3d(-4, -1, 0), 15),
               GeofencePlane::from_direction(Vec3d(0, 11901, 0), Vec3d(-2, -1, 0), 15)};
  return s;
}

const AircraftState kState{-200, 9000, -10, 0.2, 0.05, std::numbers::pi / 2 - 0.1, 150};

void BM_ApplyFilter(benchmark::State& state) {
  const WeightFactor W = WeightFactor::diagonal(6.0, 0.6, 0.1);
  const Vec3d u_d(1.0, 0.2, -0.1);
  const RowVec3<double> b(0.3, -2.0, 5.0);
  for (auto _ : state) {
    benchmark::DoNotOptimize(apply_filter<double>(u_d, -3.0, b, W, FilterMode::hard()));
  }
}
BENCHMARK(BM_ApplyFilter);

void BM_RtaExtended(benchmark::State& state) {
  const ConstraintSet s = three_constraints();
  const ExtendedParams params;
  const ControlInput u_d{1.0, 0.2, -0.1};
  for (auto _ : state) benchmark::DoNotOptimize(rta_extended(kState, 5.0, u_d, s, params));
}
BENCHMARK(BM_RtaExtended);

void BM_GradHb(benchmark::State& state) {
  const ConstraintSet s = three_constraints();
  const BacksteppingParams params;
  for (auto _ : state) benchmark::DoNotOptimize(grad_h_b(kState, 5.0, s, params));
}
BENCHMARK(BM_GradHb);

void BM_TrackingTerms(benchmark::State& state) {
  GoalTrajectory goal;
  goal.velocity = Vec3d(0, 161.32, 0);
  const ConstraintSet s = three_constraints();
  const TrackingParams params;
  const VelocityCommand plain = DesiredVelocityCommand{&goal, params.K_r};
  const VelocityCommand safe = SafeVelocityCommand{{&goal, params.K_r}, &s, ModelFreeParams{}};
  const VelocityCommand& cmd = state.range(0) ? safe : plain;
  for (auto _ : state) benchmark::DoNotOptimize(tracking_terms(kState, 5.0, cmd, params));
  state.SetLabel(state.range(0) ? "safe velocity" : "desired velocity");
}
BENCHMARK(BM_TrackingTerms)->Arg(0)->Arg(1);

void BM_IntegrateSecond(benchmark::State& state) {
  const char* files[] = {"collision_extended.json", "combined_backstepping.json",
                         "combined_modelfree.json"};
  const sim::Scenario s = sim::load_scenario(std::string(FWRTA_SCENARIO_DIR) + "/" +
                                                 files[state.range(0)],
                                             {{"simulation.horizon", 1.0}});
  for (auto _ : state) benchmark::DoNotOptimize(sim::integrate(s));
  state.SetLabel(files[state.range(0)]);
}
BENCHMARK(BM_IntegrateSecond)->DenseRange(0, 2)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
