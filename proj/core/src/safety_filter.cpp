#include "fwrta/safety_filter.hpp"

#include <cmath>

#include <Eigen/LU>

namespace fwrta {

void ClassKappaLinear::validate() const {
  if (!(gamma > 0.0) || !std::isfinite(gamma)) {
    throw RtaError(ErrorKind::InvalidParameter, "class-K gain must be positive");
  }
}

WeightFactor WeightFactor::diagonal(double w0, double w1, double w2) {
  WeightFactor out;
  out.W = Vec3d(w0, w1, w2).asDiagonal();
  return out;
}

Mat3d WeightFactor::gamma() const {
  const Mat3d inv = W.inverse();
  return inv.transpose() * inv;
}

// Any invertible W gives a positive definite Gamma; W itself need not be symmetric.
void WeightFactor::validate() const {
  if (!W.allFinite()) {
    throw RtaError(ErrorKind::InvalidParameter, "weight factor has non-finite entries");
  }
  const double scale = W.cwiseAbs().maxCoeff();
  if (!(scale > 0.0) || std::abs(W.determinant()) <= 1e-12 * scale * scale * scale) {
    throw RtaError(ErrorKind::InvalidParameter, "weight factor must be invertible");
  }
}

}  // namespace fwrta
