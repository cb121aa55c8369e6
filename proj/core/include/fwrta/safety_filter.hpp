#pragma once

// Closed-form minimum-intervention safety filter.
//
// For a barrier h with derivative h_dot(x, t, u) = a_0 + b_raw u the filter
//
//   argmin ||u - u_d||_Gamma^2   s.t.   h_dot + alpha(h) >= 0,   Gamma = W^-T W^-1
//
// has the solution u = u_d + Lambda(a, ||b||) W b^T with a = h_dot(u_d) + alpha(h)
// and b = b_raw W. Lambda is either the exact (hard) multiplier or its
// softplus over-approximation, which makes the filtered input smooth.

#include <cmath>

#include "fwrta/types.hpp"

namespace fwrta {

/// Linear extended class-K function alpha(r) = gamma r.
struct ClassKappaLinear {
  double gamma = 0.1;

  template <typename T>
  T operator()(const T& r) const {
    return gamma * r;
  }
  void validate() const;
};

/// Input weighting through the factor W of Gamma = W^-T W^-1.
struct WeightFactor {
  Mat3d W = Mat3d::Identity();

  static WeightFactor identity() { return {}; }
  static WeightFactor diagonal(double w0, double w1, double w2);

  /// Gamma = W^-T W^-1; for reporting and for tests, the filter never forms it.
  Mat3d gamma() const;
  void validate() const;
};

struct FilterMode {
  enum class Kind { Hard, Smooth };
  Kind kind = Kind::Hard;
  double nu = 1.0;

  static FilterMode hard() { return {Kind::Hard, 0.0}; }
  static FilterMode smooth(double nu) { return {Kind::Smooth, nu}; }
};

/// Exact multiplier: 0 if b = 0, otherwise max{0, -a/b} / b.
inline double lambda_hard(double a, double b_norm) {
  if (b_norm == 0.0) return 0.0;
  return std::max(0.0, -a / b_norm) / b_norm;
}

/// ln(1 + e^x) without overflow, branch-consistent under dual numbers.
template <typename T>
T softplus(const T& x) {
  if (x > 0.0) return x + log1p(exp(-x));
  return log1p(exp(x));
}

/// Smooth multiplier: 0 if b = 0, otherwise ln(1 + exp(-nu a / b)) / (nu b).
template <typename T>
T lambda_smooth(const T& a, const T& b_norm, double nu) {
  if (b_norm == 0.0) return T(0.0);
  return softplus(T(-nu * a / b_norm)) / (nu * b_norm);
}

template <typename T>
T lambda(const T& a, const T& b_norm, const FilterMode& mode) {
  if (mode.kind == FilterMode::Kind::Smooth) return lambda_smooth(a, b_norm, mode.nu);
  if (b_norm == 0.0) return T(0.0);
  if (a >= 0.0) return T(0.0);
  return (-a / b_norm) / b_norm;
}

template <typename T>
struct FilterResult {
  Vec3<T> u;
  T multiplier{};
  /// b = 0 while a < 0: no input can restore the barrier condition.
  bool infeasible = false;
};

/// Applies the closed-form filter to a desired input.
///
/// `a` is h_dot(x, t, u_d) + alpha(h) and `b_raw` is dh/dx g(x); the weight
/// factor is applied internally.
template <typename T>
FilterResult<T> apply_filter(const Vec3<T>& u_d, const T& a, const RowVec3<T>& b_raw,
                             const WeightFactor& weights, const FilterMode& mode) {
  const Mat3<T> W = weights.W.template cast<T>();
  const RowVec3<T> b = b_raw * W;
  const T b_norm = sqrt(b.dot(b));
  FilterResult<T> out;
  if (b_norm == 0.0) {
    out.u = u_d;
    out.multiplier = T(0.0);
    out.infeasible = a < 0.0;
    return out;
  }
  out.multiplier = lambda(a, b_norm, mode);
  out.u = u_d + out.multiplier * (W * b.transpose());
  return out;
}

/// Outcome of one run-time-assurance filter call.
struct RtaOutput {
  ControlInput u;
  double barrier = 0.0;     // barrier the filter enforces (h_e, h_b, ...)
  double constraint = 0.0;  // a = h_dot(u_d) + alpha(h)
  bool infeasible = false;
  bool intervened = false;
};

}  // namespace fwrta
