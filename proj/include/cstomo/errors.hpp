#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace cstomo {

enum class ErrorCode {
  kInvalidArgument,
  kInvalidState,
  kNumericalError,
  kNotFound,
  kDegenerateSolution,
  kFeasibilityUndetermined,
  kUnsupported,
  kMissingSetting,
  kInternal,
};

std::string_view to_string(ErrorCode code);

/// Library error. The code selects the failure class; what() carries context.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message)
      : std::runtime_error(message), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

[[noreturn]] inline void fail(ErrorCode code, const std::string& message) {
  throw Error(code, message);
}

inline void require(bool condition, const std::string& message) {
  if (!condition) fail(ErrorCode::kInvalidArgument, message);
}

/// Numerical tolerances shared by every module. Defaults match the invariants
/// checked in the tests; callers may pass a modified copy.
struct Tolerances {
  double hermitian = 1e-10;
  double psd = 1e-8;
  double trace = 1e-8;
  double probability = 1e-10;   // clip threshold for negative Born probabilities
  double probability_sum = 1e-8;
  double fidelity = 1e-6;       // allowed overshoot of [0,1] before clipping
};

inline const Tolerances& default_tolerances() {
  static const Tolerances tol{};
  return tol;
}

}  // namespace cstomo
