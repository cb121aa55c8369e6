#pragma once

#include <string>
#include <vector>

#include "fwrta/sim/scenario.hpp"
#include "fwrta/sim/simulator.hpp"

namespace fwrta::sim {

struct Metrics {
  double min_h_p = 0.0;
  std::vector<double> min_h_members;
  double min_h_mode = 0.0;
  double intervention_duration = 0.0;
  double max_abs_A_T = 0.0;
  double max_abs_P = 0.0;
  double max_abs_Q = 0.0;
  double final_position_error = 0.0;
  double final_time = 0.0;
  double final_speed = 0.0;
  double min_speed = 0.0;
  double max_abs_down = 0.0;
  /// max_t |P - P_d|
  double max_roll_deviation = 0.0;
  /// P equals P_d bit for bit at every step.
  bool p_transparent = true;
  std::size_t warning_count = 0;
  bool aborted = false;
  std::size_t steps = 0;
};

Metrics compute_metrics(const Scenario& scenario, const TrajectoryLog& log);

struct CheckItem {
  std::string name;
  bool passed = false;
  std::string detail;
};

struct CheckReport {
  std::vector<CheckItem> items;

  bool passed() const;
};

/// Compares metrics against the scenario's acceptance thresholds.
CheckReport check_metrics(const Scenario& scenario, const Metrics& metrics);

}  // namespace fwrta::sim
