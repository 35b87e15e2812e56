#pragma once

#include <stdexcept>
#include <string>

namespace fiscale {

// Bad inputs: violated preconditions, malformed spec strings, invalid flags.
struct ValidationError : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

// A computation started but could not be completed to tolerance.
struct NumericalError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Quadrature failure. Carries the best estimate reached and the achieved
// error bound; tail_divergent marks integrals whose tail blocks keep growing.
struct QuadratureError : NumericalError {
  QuadratureError(const std::string& msg, double best, double bound, bool divergent)
      : NumericalError(msg), best_estimate(best), error_bound(bound), tail_divergent(divergent) {}
  double best_estimate;
  double error_bound;
  bool tail_divergent;
};

// Requested an operation that requires finite Fisher information on a
// distribution where it is infinite, or a score where none exists.
struct InfiniteInformationError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

}  // namespace fiscale
