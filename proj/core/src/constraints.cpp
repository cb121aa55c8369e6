#include "fwrta/constraints.hpp"

#include <cmath>
#include <string>

namespace fwrta {

GeofencePlane GeofencePlane::from_direction(const Vec3d& point, const Vec3d& direction,
                                            double margin) {
  const double len = direction.norm();
  if (!(len > 0.0) || !std::isfinite(len)) {
    throw RtaError(ErrorKind::InvalidParameter, "geofence normal must be a nonzero vector");
  }
  return {point, direction / len, margin};
}

namespace {

void validate_member(const MovingObstacle& obs) {
  if (!(obs.radius > 0.0)) {
    throw RtaError(ErrorKind::InvalidParameter, "obstacle radius must be positive");
  }
  if (!obs.origin.allFinite() || !obs.velocity.allFinite() || !obs.acceleration.allFinite()) {
    throw RtaError(ErrorKind::InvalidParameter, "obstacle trajectory must be finite");
  }
}

void validate_member(const GeofencePlane& plane) {
  if (std::abs(plane.normal.norm() - 1.0) > 1e-12) {
    throw RtaError(ErrorKind::InvalidParameter, "geofence normal must have unit length");
  }
  if (!(plane.margin >= 0.0)) {
    throw RtaError(ErrorKind::InvalidParameter, "geofence margin must be nonnegative");
  }
  if (!plane.point.allFinite()) {
    throw RtaError(ErrorKind::InvalidParameter, "geofence point must be finite");
  }
}

}  // namespace

void ConstraintSet::validate() const {
  if (members.empty()) {
    throw RtaError(ErrorKind::InvalidParameter, "constraint set is empty");
  }
  if (!(kappa > 0.0) || !std::isfinite(kappa)) {
    throw RtaError(ErrorKind::InvalidParameter, "kappa must be positive, got " + std::to_string(kappa));
  }
  for (const Constraint& c : members) {
    std::visit([](const auto& m) { validate_member(m); }, c);
  }
}

}  // namespace fwrta
