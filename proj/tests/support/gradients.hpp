#pragma once

#include <Eigen/Core>
#include <random>

#include "fwrta/dual.hpp"
#include "fwrta/types.hpp"
#include "oracles.hpp"

namespace fwrta::testing {

using Grad8 = Eigen::Matrix<double, 1, 8>;

/// Gradient over (x, t) of a generic scalar function f(BasicState<T>, T), one dual pass per slot.
template <typename F>
Grad8 dual_gradient(F&& f, const Vec7<double>& x, double t) {
  using D = Dual<double>;
  Grad8 g;
  for (int k = 0; k < 8; ++k) {
    Vec7<D> xd;
    for (int i = 0; i < 7; ++i) xd(i) = D(x(i), i == k ? 1.0 : 0.0);
    g(k) = f(BasicState<D>::from_vector(xd), D(t, k == 7 ? 1.0 : 0.0)).deriv;
  }
  return g;
}

/// The same function sampled in plain doubles, for finite differences.
template <typename F>
Grad8 fd_gradient(F&& f, const Vec7<double>& x, double t) {
  Grad8 steps;
  steps << 1e-2, 1e-2, 1e-2, 1e-4, 1e-4, 1e-4, 1e-3, 1e-3;
  return oracle::fd_gradient(
      [&](const Vec7<double>& y, double s) { return f(AircraftState::from_vector(y), s); }, x, t,
      steps);
}

/// ||a - b||_inf / max(||a||_inf, floor).
inline double relative_error(const Grad8& a, const Grad8& b, double floor = 1e-6) {
  return (a - b).lpNorm<Eigen::Infinity>() / std::max(a.lpNorm<Eigen::Infinity>(), floor);
}

inline double uniform(std::mt19937_64& rng, double lo, double hi) {
  return std::uniform_real_distribution<double>(lo, hi)(rng);
}

}  // namespace fwrta::testing
