#ifndef ORLHARDY_QUAD_HPP
#define ORLHARDY_QUAD_HPP

#include <cstddef>
#include <functional>
#include <vector>

#include "orlhardy/parallel.hpp"

namespace orlhardy {

/// Every integral in the system reports a value together with an absolute
/// error estimate for the resolved region and a bound on everything that
/// was truncated away (tails, closures near singular endpoints).
/// The value is the sum of cell contributions in ascending order of the
/// cell left endpoint, so identical inputs give bit-identical results
/// under any execution mode.
struct QuadResult {
  double value = 0.0;
  double abs_error_estimate = 0.0;
  double tail_bound = 0.0;
  long cells_used = 0;
  bool converged = true; // error estimate met the tolerance, tails finite
  bool diverged = false; // refinement indicates non-integrability; value is a lower bound
};

// Decay model of the integrand beyond the truncation radius, used for the
// analytic tail bound.  Probe fits a power from samples at T, 1.5T, 2.25T
// and applies a safety factor of 2.
struct TailRule {
  enum class Kind { Zero, ExpDecay, PowerDecay, Probe };
  Kind kind = Kind::Probe;
  double rate = 0.0;  // exponential rate of the integrand envelope
  double power = 0.0; // power of the integrand envelope

  static TailRule zero() { return {Kind::Zero, 0.0, 0.0}; }
  static TailRule exp_decay(double rate, double power = 0.0) {
    return {Kind::ExpDecay, rate, power};
  }
  static TailRule power_decay(double power) { return {Kind::PowerDecay, 0.0, power}; }
};

struct HalflineOptions {
  double singular_exponent_at_0 = 0.0; // f ~ x^sigma near 0, sigma > -1
  double truncation = 1e3;
  double tol = 1e-8; // absolute, for the resolved region
  TailRule tail{};
  std::size_t max_cells = 20000;
  ExecMode mode = default_exec_mode();
};

/// Adaptive cell decomposition of (delta, truncation]: geometric grading
/// toward 0 until the measured-exponent closure of (0, delta] is far below
/// tol, then embedded Gauss refinement of the worst cells.
struct HalflineDecomposition {
  std::vector<double> lo, hi;  // live cells, sorted by lo
  std::vector<double> val, err;
  double delta = 0.0;
  double closure_value = 0.0;
  double closure_error = 0.0;
  bool converged = true;
  bool diverged = false;
};

HalflineDecomposition adapt_halfline(const std::function<double(double)>& f,
                                     const HalflineOptions& opt);

QuadResult integrate_halfline(const std::function<double(double)>& f,
                              const HalflineOptions& opt);
QuadResult integrate_halfline(const std::function<double(double)>& f,
                              double singular_exponent_at_0, double truncation,
                              double tol);

// Tail bound of integral of |f| over (T, inf) under the rule; sets ok=false
// (and returns +inf) when the rule cannot certify decay.
double tail_bound_beyond(const std::function<double(double)>& f, double T,
                         const TailRule& rule, bool& ok);

} // namespace orlhardy

#endif
