#include "fwrta/sim/metrics.hpp"

#include <fmt/format.h>

#include <algorithm>
#include <cmath>
#include <limits>

namespace fwrta::sim {

Metrics compute_metrics(const Scenario& s, const TrajectoryLog& log) {
  constexpr double inf = std::numeric_limits<double>::infinity();
  Metrics m;
  m.min_h_p = inf;
  m.min_h_mode = inf;
  m.min_speed = inf;
  m.min_h_members.assign(log.num_constraints, inf);
  m.warning_count = log.warnings.size();
  m.aborted = log.aborted;
  m.steps = log.records.size();

  for (const StepRecord& r : log.records) {
    m.min_h_p = std::min(m.min_h_p, r.h_p);
    for (std::size_t i = 0; i < r.h_members.size() && i < m.min_h_members.size(); ++i) {
      m.min_h_members[i] = std::min(m.min_h_members[i], r.h_members[i]);
    }
    m.min_h_mode = std::min(m.min_h_mode, r.h_mode);
    if (r.intervening) m.intervention_duration += log.dt;
    m.max_abs_A_T = std::max(m.max_abs_A_T, std::abs(r.u.A_T));
    m.max_abs_P = std::max(m.max_abs_P, std::abs(r.u.P));
    m.max_abs_Q = std::max(m.max_abs_Q, std::abs(r.u.Q));
    m.min_speed = std::min(m.min_speed, r.x.V_T);
    m.max_abs_down = std::max(m.max_abs_down, std::abs(r.x.d));
    m.max_roll_deviation = std::max(m.max_roll_deviation, std::abs(r.u.P - r.u_d.P));
    if (r.u.P != r.u_d.P) m.p_transparent = false;
  }
  if (!log.records.empty()) {
    const StepRecord& last = log.records.back();
    m.final_time = last.t;
    m.final_speed = last.x.V_T;
    m.final_position_error = (last.x.position() - s.goal.position_at(last.t)).norm();
  }
  return m;
}

bool CheckReport::passed() const {
  return std::all_of(items.begin(), items.end(), [](const CheckItem& i) { return i.passed; });
}

CheckReport check_metrics(const Scenario& s, const Metrics& m) {
  const AcceptanceThresholds& a = s.acceptance;
  CheckReport report;
  auto add = [&](std::string name, bool ok, std::string detail) {
    report.items.push_back({std::move(name), ok, std::move(detail)});
  };

  if (a.min_h_p) {
    add("min_h_p", m.min_h_p >= *a.min_h_p,
        fmt::format("min h_p = {:.6g} m (floor {:g})", m.min_h_p, *a.min_h_p));
  }
  if (a.min_h_members) {
    for (std::size_t i = 0; i < m.min_h_members.size(); ++i) {
      add(fmt::format("min_h_{}", i + 1), m.min_h_members[i] >= *a.min_h_members,
          fmt::format("min h_{} = {:.6g} m (floor {:g})", i + 1, m.min_h_members[i],
                      *a.min_h_members));
    }
  }
  if (a.min_h_mode) {
    add("min_h_mode", m.min_h_mode >= *a.min_h_mode,
        fmt::format("min {} barrier = {:.6g} (floor {:g})", to_string(s.mode), m.min_h_mode,
                    *a.min_h_mode));
  }
  if (a.p_transparent) {
    add("p_transparent", m.p_transparent,
        fmt::format("max |P - P_d| = {:.3g} rad/s", m.max_roll_deviation));
  }
  if (a.roll_engaged) {
    add("roll_engaged", m.max_roll_deviation > *a.roll_engaged,
        fmt::format("max |P - P_d| = {:.6g} rad/s (needs > {:g})", m.max_roll_deviation,
                    *a.roll_engaged));
  }
  if (a.no_warnings) {
    add("no_warnings", m.warning_count == 0, fmt::format("{} warning(s)", m.warning_count));
  }
  if (a.max_final_speed) {
    add("max_final_speed", m.final_speed < *a.max_final_speed,
        fmt::format("V_T = {:.6g} m/s at t = {:.2f} s (needs < {:g})", m.final_speed,
                    m.final_time, *a.max_final_speed));
  }
  if (a.max_abs_down) {
    add("max_abs_down", m.max_abs_down <= *a.max_abs_down,
        fmt::format("max |d| = {:.3g} m (limit {:g})", m.max_abs_down, *a.max_abs_down));
  }
  if (a.require_complete) {
    add("complete", !m.aborted,
        m.aborted ? fmt::format("aborted at t = {:.2f} s", m.final_time)
                  : fmt::format("ran to t = {:.2f} s", m.final_time));
  }
  return report;
}

}  // namespace fwrta::sim
