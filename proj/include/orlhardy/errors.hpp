#ifndef ORLHARDY_ERRORS_HPP
#define ORLHARDY_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace orlhardy {

// Precondition of an operation not met (wrong regime, non-integrable
// input, ...).  Checkers catch this to turn instances into "skipped"
// rows instead of hard failures.
struct PreconditionError : std::runtime_error {
  explicit PreconditionError(const std::string& what) : std::runtime_error(what) {}
};

// An integrand returned NaN/inf; message names the evaluation point.
struct PoisonedInputError : std::runtime_error {
  PoisonedInputError(const std::string& what, double at)
      : std::runtime_error(what + " at x=" + std::to_string(at)), point(at) {}
  double point;
};

// Root finding failed; carries the last bracketing interval.
struct NonConvergenceError : std::runtime_error {
  NonConvergenceError(const std::string& what, double lo_, double hi_)
      : std::runtime_error(what + " (bracket [" + std::to_string(lo_) + ", " +
                           std::to_string(hi_) + "])"),
        lo(lo_), hi(hi_) {}
  double lo, hi;
};

// Luxemburg-type norm is infinite (modular never drops below 1).
struct InfiniteNormError : std::runtime_error {
  explicit InfiniteNormError(const std::string& what) : std::runtime_error(what) {}
};

} // namespace orlhardy

#endif
