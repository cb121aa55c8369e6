#include "fwrta/tracking_controller.hpp"

#include <Eigen/Eigenvalues>

namespace fwrta {

double TrackingParams::min_eigen_K_v() const {
  const Mat3d sym = 0.5 * (K_v + K_v.transpose());
  return Eigen::SelfAdjointEigenSolver<Mat3d>(sym, Eigen::EigenvaluesOnly).eigenvalues().minCoeff();
}

void TrackingParams::validate() const {
  if (!(mu > 0.0)) throw RtaError(ErrorKind::InvalidParameter, "tracking mu must be positive");
  if (!(lambda > 0.0)) {
    throw RtaError(ErrorKind::InvalidParameter, "tracking lambda must be positive");
  }
  const Mat3d sym_r = 0.5 * (K_r + K_r.transpose());
  if (Eigen::SelfAdjointEigenSolver<Mat3d>(sym_r, Eigen::EigenvaluesOnly).eigenvalues().minCoeff() <=
      0.0) {
    throw RtaError(ErrorKind::InvalidParameter, "K_r must be positive definite");
  }
  const double kv_min = min_eigen_K_v();
  if (kv_min <= 0.0) throw RtaError(ErrorKind::InvalidParameter, "K_v must be positive definite");
  if (lambda > kv_min * (1.0 + 1e-12)) {
    throw RtaError(ErrorKind::InvalidGainOrdering,
                   "lambda must not exceed the smallest eigenvalue of K_v");
  }
}

namespace {

using D = Dual<double>;

BasicState<D> seed_state(const AircraftState& x, const Vec7<double>& direction) {
  const Vec7<double> xv = x.to_vector();
  Vec7<D> xd;
  for (int i = 0; i < 7; ++i) xd(i) = D(xv(i), direction(i));
  return BasicState<D>::from_vector(xd);
}

}  // namespace

TrackingTerms tracking_terms(const AircraftState& x, double t, const VelocityCommand& cmd,
                             const TrackingParams& params, const GravityParam& g,
                             const ModelLimits& limits) {
  check_state(x, limits);
  TrackingTerms out;
  const Vec3d r = x.position();
  const Vec3d v = velocity(x);
  out.v_c = command_velocity(cmd, r, t);
  out.a_c = command_accel(cmd, r, t, v);
  const Vec3d e = out.v_c - v;
  out.a_d = out.a_c + 0.5 * (params.K_v * e);

  const Mat3d M = accel_matrix(x, limits);
  const Vec3d inputs = accel_matrix_inverse(x, limits) * out.a_d;
  out.A_T = inputs(0);
  out.Q = inputs(1);
  out.R_d = inputs(2);
  out.R = turn_rate(x, g, limits);

  // R and R_d evolve affinely in P: differentiate along the closed loop with
  // P = 0 (drift part, time advancing) and along the P column of g(x).
  const InputMatrix<double> G = input_matrix(x);
  const Vec7<double> drift_dir = drift(x, g) + G * Vec3d(out.A_T, 0.0, out.Q);
  const Vec7<double> roll_dir = G.col(1);

  {
    const BasicState<D> xd = seed_state(x, drift_dir);
    const D td(t, 1.0);
    out.f_R = turn_rate(xd, g, limits).deriv;
    out.f_Rd = desired_turn_rate(xd, td, cmd, params, limits).deriv;
  }
  {
    const BasicState<D> xd = seed_state(x, roll_dir);
    const D td(t, 0.0);
    out.g_R = turn_rate(xd, g, limits).deriv;
    out.g_Rd = desired_turn_rate(xd, td, cmd, params, limits).deriv;
  }

  const double gap = out.R_d - out.R;
  const double e_sq = e.dot(e);
  out.V0 = 0.5 * e_sq;
  out.V = out.V0 + gap * gap / (2.0 * params.mu);
  out.a_P = -0.5 * e.dot(params.K_v * e) + e.dot(M.col(2)) * gap +
            gap * (out.f_Rd - out.f_R) / params.mu + 0.5 * params.lambda * e_sq +
            0.5 * params.lambda * gap * gap / params.mu;
  out.b_P = gap * (out.g_Rd - out.g_R) / params.mu;
  out.P = roll_rate_from_coefficients(out.a_P, out.b_P);
  return out;
}

double roll_rate(const AircraftState& x, double t, const VelocityCommand& cmd,
                 const TrackingParams& params, const GravityParam& g, const ModelLimits& limits) {
  return tracking_terms(x, t, cmd, params, g, limits).P;
}

ControlInput track(const AircraftState& x, double t, const VelocityCommand& cmd,
                   const TrackingParams& params, const GravityParam& g, const ModelLimits& limits) {
  return tracking_terms(x, t, cmd, params, g, limits).input();
}

}  // namespace fwrta
