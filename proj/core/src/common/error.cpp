#include "pinngm/common/error.hpp"

namespace pinngm {

std::string_view to_string(ErrorCategory category) {
  switch (category) {
    case ErrorCategory::kConfig:
      return "config";
    case ErrorCategory::kIo:
      return "io";
    case ErrorCategory::kGeometry:
      return "geometry";
    case ErrorCategory::kSingularity:
      return "singularity";
    case ErrorCategory::kNumerical:
      return "numerical";
    case ErrorCategory::kInvalidArgument:
      return "invalid-argument";
  }
  return "unknown";
}

}  // namespace pinngm
