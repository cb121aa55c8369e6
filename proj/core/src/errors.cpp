#include "fwrta/types.hpp"

namespace fwrta {

const char* to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::SingularSpeed:
      return "SingularSpeed";
    case ErrorKind::SingularPitch:
      return "SingularPitch";
    case ErrorKind::CoincidentPosition:
      return "CoincidentPosition";
    case ErrorKind::ZeroDesiredVelocity:
      return "ZeroDesiredVelocity";
    case ErrorKind::InvalidGainOrdering:
      return "InvalidGainOrdering";
    case ErrorKind::InvalidParameter:
      return "InvalidParameter";
  }
  return "Unknown";
}

}  // namespace fwrta
