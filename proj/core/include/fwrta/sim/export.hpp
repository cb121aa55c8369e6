#pragma once

#include <filesystem>
#include <ostream>
#include <string>
#include <vector>

#include "fwrta/sim/metrics.hpp"
#include "fwrta/sim/scenario.hpp"
#include "fwrta/sim/simulator.hpp"

namespace fwrta::sim {

enum class ExportFormat { Csv, Json, Svg };

ExportFormat parse_export_format(const std::string& name);
const char* extension(ExportFormat format);

/// t,n,e,d,phi,theta,psi,V_T,A_T_d,P_d,Q_d,A_T,P,Q,h_p,h_1..h_N,h_mode,intervening
std::string csv_header(std::size_t num_constraints);

void write_csv(std::ostream& out, const TrajectoryLog& log);
void write_json(std::ostream& out, const Scenario& scenario, const TrajectoryLog& log,
                const Metrics& metrics);
void write_svg(std::ostream& out, const Scenario& scenario, const TrajectoryLog& log);

/// Writes `<dir>/<scenario name>.<ext>` and returns the path; I/O failures throw ScenarioError.
std::filesystem::path export_log(const std::filesystem::path& dir, ExportFormat format,
                                 const Scenario& scenario, const TrajectoryLog& log,
                                 const Metrics& metrics);

struct SweepRow {
  double value = 0.0;
  Metrics metrics;
  bool passed = false;
  std::string error;
};

/// Runs the scenario for `steps` evenly spaced values of one numeric parameter.
std::vector<SweepRow> sweep(const std::filesystem::path& path, const std::string& param,
                            double min, double max, int steps, unsigned threads = 1);

void write_sweep_csv(std::ostream& out, const std::string& param,
                     const std::vector<SweepRow>& rows);

}  // namespace fwrta::sim
