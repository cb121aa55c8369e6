#pragma once

// Fixed-step closed-loop simulation of a scenario.

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "fwrta/sim/scenario.hpp"

namespace fwrta::sim {

/// Controller output at one (x, t).
struct ControlStep {
  ControlInput u_d;
  ControlInput u;
  double h_p = 0.0;
  std::vector<double> h_members;
  double h_mode = 0.0;
  bool intervening = false;
  bool infeasible = false;
};

struct StepRecord {
  double t = 0.0;
  AircraftState x;
  ControlInput u_d;
  ControlInput u;
  double h_p = 0.0;
  std::vector<double> h_members;
  double h_mode = 0.0;
  bool intervening = false;
  bool infeasible = false;
};

struct LogWarning {
  double t = 0.0;
  std::string message;
};

struct TrajectoryLog {
  std::string scenario;
  RtaMode mode = RtaMode::Off;
  double dt = 0.0;
  std::size_t num_constraints = 0;
  std::vector<StepRecord> records;
  std::vector<LogWarning> warnings;
  bool aborted = false;
  std::optional<ErrorKind> abort_kind;
  std::string abort_reason;
};

/// Nominal and filtered inputs for the scenario's RTA mode.
ControlStep evaluate_control(const Scenario& scenario, const AircraftState& x, double t);

/// Barrier the mode enforces, evaluated at (x, t); h_p when the mode is off.
double mode_barrier(const Scenario& scenario, const AircraftState& x, double t);

/// One classic Runge-Kutta step of x_dot = f(x, t).
AircraftState rk4_step(const AircraftState& x, double t, double dt,
                       const std::function<Vec7<double>(const AircraftState&, double)>& f);

/// Runs the closed loop from the initial state to the horizon.
TrajectoryLog integrate(const Scenario& scenario);

}  // namespace fwrta::sim
