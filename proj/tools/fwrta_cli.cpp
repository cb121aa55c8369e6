// fwrta: run, check and sweep run-time-assurance scenarios.
//
// Exit codes: 0 ok, 1 threshold violation, 2 schema/IO error, 3 numerical abort.

#include <fmt/format.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <thread>

#include "CLI11.hpp"
#include "fwrta/sim/export.hpp"
#include "fwrta/sim/metrics.hpp"
#include "fwrta/sim/scenario.hpp"
#include "fwrta/sim/simulator.hpp"

namespace fs = std::filesystem;
using namespace fwrta::sim;

namespace {

enum Exit : int { kOk = 0, kThreshold = 1, kSchemaOrIo = 2, kNumericalAbort = 3 };

fs::path default_out_dir() {
  if (const char* env = std::getenv("RTA_OUT_DIR"); env && *env) return env;
  return "out";
}

void print_metrics(const Metrics& m) {
  fmt::print("  min h_p            {:.6g} m\n", m.min_h_p);
  for (std::size_t i = 0; i < m.min_h_members.size(); ++i) {
    fmt::print("  min h_{:<12} {:.6g} m\n", i + 1, m.min_h_members[i]);
  }
  fmt::print("  min mode barrier   {:.6g}\n", m.min_h_mode);
  fmt::print("  intervention       {:.2f} s\n", m.intervention_duration);
  fmt::print("  max |A_T| |P| |Q|  {:.4g} m/s^2, {:.4g} rad/s, {:.4g} rad/s\n", m.max_abs_A_T,
             m.max_abs_P, m.max_abs_Q);
  fmt::print("  final pos. error   {:.6g} m at t = {:.2f} s\n", m.final_position_error,
             m.final_time);
  fmt::print("  final V_T          {:.6g} m/s\n", m.final_speed);
  fmt::print("  warnings           {}\n", m.warning_count);
}

int report_abort(const TrajectoryLog& log) {
  if (!log.aborted) return kOk;
  fmt::print(stderr, "numerical abort: {}\n", log.abort_reason);
  return kNumericalAbort;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Run-time assurance simulator for fixed-wing aircraft"};
  app.require_subcommand(1);

  std::string scenario_path;
  std::string out_dir;
  std::string format = "csv";
  std::optional<double> dt, horizon;
  auto* run = app.add_subcommand("run", "Simulate a scenario and export the trajectory");
  run->add_option("--scenario", scenario_path, "Scenario JSON file")->required();
  run->add_option("--out", out_dir, "Output directory (default: $RTA_OUT_DIR or ./out)");
  run->add_option("--format", format, "csv, json or svg")
      ->check(CLI::IsMember({"csv", "json", "svg"}));
  run->add_option("--dt", dt, "Override the step size [s]");
  run->add_option("--horizon", horizon, "Override the horizon [s]");

  auto* check = app.add_subcommand("check", "Simulate and compare against acceptance thresholds");
  check->add_option("--scenario", scenario_path, "Scenario JSON file")->required();

  std::string param;
  double min = 0.0, max = 0.0;
  int steps = 0;
  unsigned jobs = std::max(1u, std::thread::hardware_concurrency());
  auto* sw = app.add_subcommand("sweep", "Metrics table over a range of one parameter");
  sw->add_option("--scenario", scenario_path, "Scenario JSON file")->required();
  sw->add_option("--param", param, "Dotted path or JSON pointer, e.g. rta.gamma_p")->required();
  sw->add_option("--min", min, "First value")->required();
  sw->add_option("--max", max, "Last value")->required();
  sw->add_option("--steps", steps, "Number of values")->required()->check(CLI::PositiveNumber);
  sw->add_option("--out", out_dir, "Write the table to <dir>/<name>_sweep.csv as well");
  sw->add_option("--jobs", jobs, "Concurrent runs");

  CLI11_PARSE(app, argc, argv);

  try {
    if (run->parsed()) {
      std::vector<ParamOverride> overrides;
      if (dt) overrides.emplace_back("simulation.dt", *dt);
      if (horizon) overrides.emplace_back("simulation.horizon", *horizon);
      const Scenario s = load_scenario(scenario_path, overrides);
      const TrajectoryLog log = integrate(s);
      const Metrics m = compute_metrics(s, log);
      const fs::path dir = out_dir.empty() ? default_out_dir() : fs::path(out_dir);
      const fs::path written = export_log(dir, parse_export_format(format), s, log, m);
      fmt::print("{} ({}): {} steps -> {}\n", s.name, to_string(s.mode), log.records.size(),
                 written.string());
      print_metrics(m);
      for (const LogWarning& w : log.warnings) fmt::print("  t={:.2f}: {}\n", w.t, w.message);
      return report_abort(log);
    }

    if (check->parsed()) {
      const Scenario s = load_scenario(scenario_path);
      const TrajectoryLog log = integrate(s);
      const Metrics m = compute_metrics(s, log);
      const CheckReport report = check_metrics(s, m);
      fmt::print("{} ({})\n", s.name, to_string(s.mode));
      for (const CheckItem& item : report.items) {
        fmt::print("  [{}] {}: {}\n", item.passed ? "PASS" : "FAIL", item.name, item.detail);
      }
      if (log.aborted) fmt::print("  note: {}\n", log.abort_reason);
      if (!report.passed()) return kThreshold;
      // An abort the thresholds tolerate (e.g. stopping at the speed floor) is not a failure.
      return s.acceptance.require_complete ? report_abort(log) : kOk;
    }

    if (sw->parsed()) {
      const std::vector<SweepRow> rows = sweep(scenario_path, param, min, max, steps, jobs);
      write_sweep_csv(std::cout, param, rows);
      if (!out_dir.empty()) {
        fs::create_directories(out_dir);
        const fs::path path = fs::path(out_dir) / (fs::path(scenario_path).stem().string() +
                                                   "_sweep.csv");
        std::ofstream out(path);
        if (!out) throw ScenarioError(path.string() + ": cannot open for writing");
        write_sweep_csv(out, param, rows);
      }
      const bool all_passed =
          std::all_of(rows.begin(), rows.end(), [](const SweepRow& r) { return r.passed; });
      return all_passed ? kOk : kThreshold;
    }
  } catch (const ScenarioError& e) {
    fmt::print(stderr, "error: {}\n", e.what());
    return kSchemaOrIo;
  } catch (const fs::filesystem_error& e) {
    fmt::print(stderr, "error: {}\n", e.what());
    return kSchemaOrIo;
  } catch (const fwrta::RtaError& e) {
    fmt::print(stderr, "numerical error: {}\n", e.what());
    return kNumericalAbort;
  }
  return kOk;
}
