#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "fwrta/aircraft_model.hpp"
#include "fwrta/backstepping_rta.hpp"
#include "fwrta/constraints.hpp"
#include "fwrta/extended_rta.hpp"
#include "fwrta/modelfree_rta.hpp"
#include "fwrta/tracking_controller.hpp"

namespace fwrta::sim {

inline constexpr int kScenarioSchemaVersion = 1;

enum class RtaMode { Off, Extended, Backstepping, ModelFree };

const char* to_string(RtaMode mode);

/// When the controller is evaluated inside a step.
enum class ControlUpdate {
  ZeroOrderHold,  // once per step at the step's start state
  PerStage,       // at every Runge-Kutta stage (smooth closed loop)
};

struct SimulationSettings {
  double dt = 0.01;
  double horizon = 120.0;
  ControlUpdate update = ControlUpdate::ZeroOrderHold;
  std::uint64_t seed = 0;
};

/// Pass/fail thresholds evaluated by `check`; unset entries are not checked.
struct AcceptanceThresholds {
  std::optional<double> min_h_p;
  std::optional<double> min_h_members;
  std::optional<double> min_h_mode;
  bool p_transparent = false;
  std::optional<double> roll_engaged;
  bool no_warnings = false;
  std::optional<double> max_final_speed;
  std::optional<double> max_abs_down;
  bool require_complete = false;
};

struct Scenario {
  std::string name;
  std::string description;
  SimulationSettings sim;
  GravityParam gravity;
  ModelLimits limits;
  AircraftState initial_state;
  GoalTrajectory goal;
  TrackingParams tracking;
  ConstraintSet constraints;
  RtaMode mode = RtaMode::Off;
  ExtendedParams extended;
  BacksteppingParams backstepping;
  ModelFreeParams modelfree;
  AcceptanceThresholds acceptance;
};

/// Schema, parse or I/O failure while reading a scenario.
class ScenarioError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A numeric override applied before parsing, e.g. {"rta.gamma_p", 0.2}.
using ParamOverride = std::pair<std::string, double>;

Scenario parse_scenario(const std::string& text, const std::string& source = "<string>",
                        const std::vector<ParamOverride>& overrides = {});
Scenario load_scenario(const std::filesystem::path& path,
                       const std::vector<ParamOverride>& overrides = {});

/// Throws ScenarioError if the initial state violates a barrier the mode relies on.
void validate_initial_state(const Scenario& scenario);

}  // namespace fwrta::sim
