#include "cstomo/errors.hpp"

namespace cstomo {

std::string_view to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::kInvalidArgument: return "invalid-argument";
    case ErrorCode::kInvalidState: return "invalid-state";
    case ErrorCode::kNumericalError: return "numerical-error";
    case ErrorCode::kNotFound: return "not-found";
    case ErrorCode::kDegenerateSolution: return "degenerate-solution";
    case ErrorCode::kFeasibilityUndetermined: return "feasibility-undetermined";
    case ErrorCode::kUnsupported: return "unsupported";
    case ErrorCode::kMissingSetting: return "missing-setting";
    case ErrorCode::kInternal: return "internal-error";
  }
  return "unknown";
}

}  // namespace cstomo
