#include "fwrta/sim/simulator.hpp"

#include <fmt/format.h>

#include <cmath>
#include <limits>

namespace fwrta::sim {

namespace {

DesiredVelocityCommand nominal_command(const Scenario& s) { return {&s.goal, s.tracking.K_r}; }

SafeVelocityCommand safe_command(const Scenario& s) {
  return {nominal_command(s), &s.constraints, s.modelfree};
}

void fill_h_p(const Scenario& s, const AircraftState& x, double t, ControlStep& out) {
  if (s.constraints.members.empty()) {
    out.h_p = std::numeric_limits<double>::infinity();
    return;
  }
  const BarrierEval<double> hp = compose_h_p(x.position(), t, s.constraints);
  out.h_p = hp.value;
  out.h_members = hp.per_constraint;
}

}  // namespace

ControlStep evaluate_control(const Scenario& s, const AircraftState& x, double t) {
  ControlStep out;
  fill_h_p(s, x, t, out);
  const VelocityCommand nominal = nominal_command(s);
  out.u_d = track(x, t, nominal, s.tracking, s.gravity, s.limits);

  switch (s.mode) {
    case RtaMode::Off:
      out.u = out.u_d;
      out.h_mode = out.h_p;
      break;
    case RtaMode::Extended: {
      const RtaOutput r =
          rta_extended(x, t, out.u_d, s.constraints, s.extended, s.gravity, s.limits);
      out.u = r.u;
      out.h_mode = r.barrier;
      out.infeasible = r.infeasible;
      break;
    }
    case RtaMode::Backstepping: {
      const RtaOutput r =
          rta_backstepping(x, t, out.u_d, s.constraints, s.backstepping, s.gravity, s.limits);
      out.u = r.u;
      out.h_mode = r.barrier;
      out.infeasible = r.infeasible;
      break;
    }
    case RtaMode::ModelFree: {
      const TrackingTerms terms =
          tracking_terms(x, t, safe_command(s), s.tracking, s.gravity, s.limits);
      out.u = terms.input();
      out.h_mode = h_V(out.h_p, terms.V, s.modelfree, s.tracking.lambda);
      break;
    }
  }
  out.intervening = out.u.A_T != out.u_d.A_T || out.u.P != out.u_d.P || out.u.Q != out.u_d.Q;
  return out;
}

double mode_barrier(const Scenario& s, const AircraftState& x, double t) {
  switch (s.mode) {
    case RtaMode::Off: {
      if (s.constraints.members.empty()) return std::numeric_limits<double>::infinity();
      return compose_h_p(x.position(), t, s.constraints).value;
    }
    case RtaMode::Extended:
      return h_e_composed(x.position(), velocity(x), t, s.constraints, s.extended.gamma_p).value;
    case RtaMode::Backstepping:
      return h_b(x, t, s.constraints, s.backstepping, s.gravity, s.limits);
    case RtaMode::ModelFree: {
      const double hp = compose_h_p(x.position(), t, s.constraints).value;
      const double V = clf_V(x, t, VelocityCommand(safe_command(s)), s.tracking, s.gravity,
                             s.limits);
      return h_V(hp, V, s.modelfree, s.tracking.lambda);
    }
  }
  return 0.0;
}

void validate_initial_state(const Scenario& s) {
  if (s.mode == RtaMode::Off) return;
  const AircraftState& x = s.initial_state;
  auto require = [&](const char* name, double value) {
    if (!(value >= 0.0)) {
      throw ScenarioError(fmt::format(
          "{}: initial state violates {} (value {:.6g} < 0); the {} filter needs a safe start",
          s.name, name, value, to_string(s.mode)));
    }
  };
  try {
    const BarrierEval<double> hp = compose_h_p(x.position(), 0.0, s.constraints);
    for (std::size_t i = 0; i < hp.per_constraint.size(); ++i) {
      require(fmt::format("h_{}", i + 1).c_str(), hp.per_constraint[i]);
    }
    require("h_p", hp.value);
    switch (s.mode) {
      case RtaMode::Extended: require("h_e", mode_barrier(s, x, 0.0)); break;
      case RtaMode::Backstepping:
        require("h_e", h_e_composed(x.position(), velocity(x), 0.0, s.constraints,
                                    s.backstepping.gamma_p)
                           .value);
        require("h_b", mode_barrier(s, x, 0.0));
        break;
      case RtaMode::ModelFree: require("h_V", mode_barrier(s, x, 0.0)); break;
      case RtaMode::Off: break;
    }
  } catch (const RtaError& e) {
    throw ScenarioError(fmt::format("{}: initial state: {}", s.name, e.what()));
  }
}

AircraftState rk4_step(const AircraftState& x, double t, double dt,
                       const std::function<Vec7<double>(const AircraftState&, double)>& f) {
  const Vec7<double> x0 = x.to_vector();
  const Vec7<double> k1 = f(x, t);
  const Vec7<double> k2 = f(AircraftState::from_vector(x0 + 0.5 * dt * k1), t + 0.5 * dt);
  const Vec7<double> k3 = f(AircraftState::from_vector(x0 + 0.5 * dt * k2), t + 0.5 * dt);
  const Vec7<double> k4 = f(AircraftState::from_vector(x0 + dt * k3), t + dt);
  return AircraftState::from_vector(x0 + (dt / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4));
}

TrajectoryLog integrate(const Scenario& s) {
  TrajectoryLog log;
  log.scenario = s.name;
  log.mode = s.mode;
  log.dt = s.sim.dt;
  log.num_constraints = s.constraints.members.size();

  const double dt = s.sim.dt;
  const auto steps = static_cast<long long>(std::llround(s.sim.horizon / dt));
  log.records.reserve(static_cast<std::size_t>(steps) + 1);

  AircraftState x = s.initial_state;
  for (long long k = 0; k <= steps; ++k) {
    const double t = static_cast<double>(k) * dt;
    try {
      if (!x.to_vector().allFinite()) {
        throw RtaError(ErrorKind::InvalidParameter, "state became non-finite");
      }
      const ControlStep c = evaluate_control(s, x, t);
      log.records.push_back(
          {t, x, c.u_d, c.u, c.h_p, c.h_members, c.h_mode, c.intervening, c.infeasible});
      if (c.infeasible) {
        log.warnings.push_back(
            {t, "InfeasibilityWarning: barrier condition cannot be met (b = 0, a < 0)"});
      }
      if (k == steps) break;

      if (s.sim.update == ControlUpdate::ZeroOrderHold) {
        const ControlInput u = c.u;
        x = rk4_step(x, t, dt, [&](const AircraftState& xs, double) {
          return dynamics(xs, u, s.gravity, s.limits);
        });
      } else {
        x = rk4_step(x, t, dt, [&](const AircraftState& xs, double ts) {
          return dynamics(xs, evaluate_control(s, xs, ts).u, s.gravity, s.limits);
        });
      }
    } catch (const RtaError& e) {
      log.aborted = true;
      log.abort_kind = e.kind();
      log.abort_reason = fmt::format("t={:.6f}: {}: {}", t, to_string(e.kind()), e.what());
      break;
    }
  }
  return log;
}

}  // namespace fwrta::sim
