#include <gtest/gtest.h>

#include <cmath>
#include <cstring>
#include <filesystem>
#include <numbers>
#include <sstream>
#include <string>

#include "fwrta/sim/export.hpp"
#include "fwrta/sim/metrics.hpp"
#include "fwrta/sim/scenario.hpp"
#include "fwrta/sim/simulator.hpp"

using namespace fwrta;
using namespace fwrta::sim;

namespace {

const std::filesystem::path kDir = FWRTA_SCENARIO_DIR;

std::string minimal(const std::string& sim = R"("dt": 0.01, "horizon": 10.0)") {
  return R"({
    "schema_version": 1,
    "name": "level",
    "simulation": {)" + sim + R"(},
    // Goal moves with the aircraft, so the tracking law commands nothing.
    "initial_state": {"n": 0, "e": 0, "d": -100, "phi": 0, "theta": 0, "psi": 0.5, "V_T": 120},
    "goal": {"origin": [0, 0, -100], "velocity": [105.30990742684473, 57.53106463250436, 0]},
    "constraints": {"kappa": 0.007, "members": []},
    "rta": {"mode": "off"}
  })";
}

std::string error_of(const std::string& text) {
  try {
    (void)parse_scenario(text, "test.json");
  } catch (const ScenarioError& e) {
    return e.what();
  }
  return {};
}

}  // namespace

TEST(Scenario, ParsesWithDefaults) {
  const Scenario s = parse_scenario(minimal());
  EXPECT_EQ(s.name, "level");
  EXPECT_EQ(s.mode, RtaMode::Off);
  EXPECT_EQ(s.sim.update, ControlUpdate::ZeroOrderHold);
  EXPECT_DOUBLE_EQ(s.tracking.lambda, 0.2);
  EXPECT_DOUBLE_EQ(s.extended.gamma_p, 0.1);
  EXPECT_DOUBLE_EQ(s.backstepping.mu_e, 1e-4);
  EXPECT_DOUBLE_EQ(s.modelfree.Gamma_v, 4.0);
  EXPECT_DOUBLE_EQ(s.initial_state.psi, 0.5);
}

TEST(Scenario, ErrorsNameTheField) {
  EXPECT_NE(error_of(minimal(R"("horizon": 10.0)")).find("simulation.dt"), std::string::npos);
  EXPECT_NE(error_of(minimal(R"("dt": -1, "horizon": 10.0)")).find("dt"), std::string::npos);
  std::string bad_mode = minimal();
  bad_mode.replace(bad_mode.find("\"off\""), 5, "\"sideways\"");
  EXPECT_NE(error_of(bad_mode).find("rta.mode"), std::string::npos);
  EXPECT_NE(error_of("{ not json").find("test.json"), std::string::npos);
  std::string wrong_type = minimal();
  wrong_type.replace(wrong_type.find("\"V_T\": 120"), 10, "\"V_T\": \"fast\"");
  EXPECT_NE(error_of(wrong_type).find("V_T"), std::string::npos);
}

TEST(Scenario, OverridesApplyByDottedPath) {
  const Scenario s = parse_scenario(minimal(), "t", {{"simulation.dt", 0.02}, {"tracking.mu", 2e-5}});
  EXPECT_DOUBLE_EQ(s.sim.dt, 0.02);
  EXPECT_DOUBLE_EQ(s.tracking.mu, 2e-5);
  EXPECT_THROW((void)parse_scenario(minimal(), "t", {{"nope.nothing", 1.0}}), ScenarioError);
}

TEST(Scenario, RejectsUnsafeInitialState) {
  try {
    (void)load_scenario(kDir / "collision_extended.json", {{"initial_state.n", -3040.0}});
    FAIL() << "expected rejection";
  } catch (const ScenarioError& e) {
    EXPECT_NE(std::string(e.what()).find("h_1"), std::string::npos) << e.what();
  }
}

TEST(Scenario, BundledFilesLoad) {
  for (const char* name : {"collision_extended.json", "geofence_extended.json",
                           "combined_backstepping.json", "combined_modelfree.json",
                           "tracking_step.json"}) {
    EXPECT_NO_THROW((void)load_scenario(kDir / name)) << name;
  }
}

TEST(Integrator, Rk4IsFourthOrderOnLinearFlow) {
  const auto f = [](const AircraftState& x, double) -> Vec7<double> { return -x.to_vector(); };
  AircraftState x0{1, 1, 1, 1, 1, 1, 1};
  auto err = [&](double dt) {
    AircraftState x = x0;
    for (int k = 0; k < static_cast<int>(std::lround(1.0 / dt)); ++k) x = rk4_step(x, k * dt, dt, f);
    return std::abs(x.n - std::exp(-1.0));
  };
  EXPECT_NEAR(std::log2(err(0.1) / err(0.05)), 4.0, 0.1);
}

TEST(Integrator, LevelFlightIsExact) {
  const Scenario s = parse_scenario(minimal());
  const TrajectoryLog log = integrate(s);
  ASSERT_FALSE(log.aborted);
  ASSERT_EQ(log.records.size(), 1001u);
  const StepRecord& last = log.records.back();
  EXPECT_DOUBLE_EQ(last.t, 10.0);
  EXPECT_NEAR(last.x.n, 1200 * std::cos(0.5), 1e-6);
  EXPECT_NEAR(last.x.e, 1200 * std::sin(0.5), 1e-6);
  EXPECT_NEAR(last.x.d, -100.0, 1e-6);
  EXPECT_NEAR(last.x.V_T, 120.0, 1e-6);
  EXPECT_LE(last.u.to_vector().norm(), 1e-6);
}

TEST(Integrator, RunsAreBitIdentical) {
  const Scenario s = load_scenario(kDir / "combined_backstepping.json", {{"simulation.horizon", 5.0}});
  const TrajectoryLog a = integrate(s), b = integrate(s);
  ASSERT_EQ(a.records.size(), b.records.size());
  for (std::size_t k = 0; k < a.records.size(); ++k) {
    const Vec7<double> xa = a.records[k].x.to_vector(), xb = b.records[k].x.to_vector();
    ASSERT_EQ(std::memcmp(xa.data(), xb.data(), sizeof(double) * 7), 0) << "step " << k;
  }
}

TEST(Integrator, AbortsOnModelBreakdown) {
  // Pitched almost vertical at the start: the first control evaluation fails.
  Scenario s = parse_scenario(minimal());
  s.initial_state.theta = std::numbers::pi / 2 - 1e-4;
  const TrajectoryLog log = integrate(s);
  EXPECT_TRUE(log.aborted);
  ASSERT_TRUE(log.abort_kind.has_value());
  EXPECT_EQ(*log.abort_kind, ErrorKind::SingularPitch);
  EXPECT_NE(log.abort_reason.find("SingularPitch"), std::string::npos);
}

TEST(Metrics, ThresholdChecks) {
  Scenario s = parse_scenario(minimal());
  const Metrics m = compute_metrics(s, integrate(s));
  EXPECT_TRUE(m.p_transparent);
  EXPECT_EQ(m.warning_count, 0u);
  EXPECT_NEAR(m.final_speed, 120.0, 1e-6);
  s.acceptance.max_final_speed = 20.0;
  s.acceptance.require_complete = true;
  const CheckReport r = check_metrics(s, m);
  EXPECT_FALSE(r.passed());
  ASSERT_EQ(r.items.size(), 2u);
  EXPECT_FALSE(r.items[0].passed);
  EXPECT_TRUE(r.items[1].passed);
}

TEST(Export, CsvHeaderAndRows) {
  EXPECT_EQ(csv_header(2),
            "t,n,e,d,phi,theta,psi,V_T,A_T_d,P_d,Q_d,A_T,P,Q,h_p,h_1,h_2,h_mode,intervening");
  const Scenario s = load_scenario(kDir / "combined_backstepping.json", {{"simulation.horizon", 1.0}});
  const TrajectoryLog log = integrate(s);
  std::ostringstream out;
  write_csv(out, log);
  std::istringstream in(out.str());
  std::string line;
  std::getline(in, line);
  EXPECT_EQ(line, csv_header(3));
  int rows = 0;
  while (std::getline(in, line)) {
    ++rows;
    EXPECT_EQ(std::count(line.begin(), line.end(), ','), 19);
  }
  EXPECT_EQ(rows, 101);
}

TEST(Export, WrapsAnglesAtOutputOnly) {
  Scenario s = parse_scenario(minimal(R"("dt": 0.01, "horizon": 0.02)"));
  s.initial_state.psi = 0.5 + 4 * std::numbers::pi;
  s.goal.velocity = Vec3d(105.30990742684473, 57.53106463250436, 0);
  const TrajectoryLog log = integrate(s);
  EXPECT_NEAR(log.records.back().x.psi, 0.5 + 4 * std::numbers::pi, 1e-9);
  std::ostringstream out;
  write_csv(out, log);
  const std::string text = out.str();
  const std::string row = text.substr(text.find('\n') + 1);
  std::vector<std::string> fields;
  std::stringstream ss(row.substr(0, row.find('\n')));
  for (std::string f; std::getline(ss, f, ',');) fields.push_back(f);
  EXPECT_NEAR(std::stod(fields[6]), 0.5, 1e-12);
}

TEST(Export, JsonAndSvg) {
  const Scenario s = load_scenario(kDir / "combined_modelfree.json", {{"simulation.horizon", 1.0}});
  const TrajectoryLog log = integrate(s);
  const Metrics m = compute_metrics(s, log);
  std::ostringstream json, svg;
  write_json(json, s, log, m);
  write_svg(svg, s, log);
  EXPECT_EQ(json.str().front(), '{');
  EXPECT_NE(json.str().find("\"metrics\""), std::string::npos);
  EXPECT_NE(json.str().find("\"records\""), std::string::npos);
  EXPECT_EQ(svg.str().rfind("<svg", 0), 0u);
  EXPECT_NE(svg.str().find("</svg>"), std::string::npos);
  EXPECT_THROW((void)parse_export_format("xlsx"), ScenarioError);
}

TEST(Sweep, RowsFollowTheGrid) {
  const auto rows = sweep(kDir / "tracking_step.json", "tracking.K_r", 0.04, 0.06, 3, 2);
  ASSERT_EQ(rows.size(), 3u);
  EXPECT_DOUBLE_EQ(rows[1].value, 0.05);
  for (const SweepRow& r : rows) {
    EXPECT_TRUE(r.passed) << r.error;
    EXPECT_GT(r.metrics.steps, 0u);
  }
  EXPECT_THROW((void)sweep(kDir / "tracking_step.json", "no.such", 0, 1, 2, 1), ScenarioError);
}
