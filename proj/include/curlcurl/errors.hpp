#pragma once

#include <stdexcept>
#include <string>

namespace curlcurl {

struct ConfigError : std::runtime_error {
  explicit ConfigError(const std::string& what) : std::runtime_error(what) {}
};

/// Iterative method failed to reach its tolerance. Carries the last residual
/// so callers can report how far the run got.
struct ConvergenceError : std::runtime_error {
  double residual = 0.0;
  int iterations = 0;
  ConvergenceError(const std::string& what, double res, int iters)
      : std::runtime_error(what), residual(res), iterations(iters) {}
};

/// Fibering-map root bracket could not be established; the input is zero,
/// underflows, or the nonlinearity violates its monotonicity contract.
struct DegenerateInputError : std::runtime_error {
  explicit DegenerateInputError(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace curlcurl
