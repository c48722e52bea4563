#ifndef ORLHARDY_GRID_HPP
#define ORLHARDY_GRID_HPP

#include <cstddef>
#include <vector>

namespace orlhardy {

// Behavior on (0, x1): u(x) = offset + (u(x1) - offset) * (x/x1)^beta.
// beta = 0 is the constant rule; a nonzero offset keeps the power structure
// of u - c exact under constant shifts.
struct LeftRule {
  double beta = 0.0;
  double offset = 0.0;
};

// Behavior on (xn, inf): u(x) = u(xn) * (x/xn)^power * exp(-rate*(x-xn)),
// or exactly 0 when compact is set.  power = rate = 0 is a constant tail.
struct RightRule {
  bool compact = false;
  double power = 0.0;
  double rate = 0.0;
};

/// A real function on (0, inf): piecewise-linear between strictly
/// increasing positive nodes, power extrapolation on the left, an
/// exponential-power envelope (or zero) on the right.  The interpolant
/// plus the two rules IS the function every operation works with.
class GridFunction {
 public:
  GridFunction(std::vector<double> nodes, std::vector<double> values,
               LeftRule left, RightRule right);

  double eval(double x) const;

  // u(x+h) - u(x) for h >= 0, computed without forming x+h when h is small
  // relative to the local mesh so the piecewise structure is resolved
  // exactly (within one linear piece the result is slope*h).
  double delta(double x, double h) const;

  // Integral of u over (0, x]; exact under the model (left rule closed
  // form, trapezoids on pieces, quadrature on the right envelope).
  double integral_to(double x) const;

  const std::vector<double>& nodes() const { return nodes_; }
  const std::vector<double>& values() const { return values_; }
  const LeftRule& left() const { return left_; }
  const RightRule& right() const { return right_; }

  double x_first() const { return nodes_.front(); }
  double x_last() const { return nodes_.back(); }
  std::size_t size() const { return nodes_.size(); }

  double slope(std::size_t piece) const; // between nodes piece, piece+1
  double min_spacing() const { return min_spacing_; }

  // u(0+) under the model.
  double left_limit() const {
    return left_.beta > 0.0 ? left_.offset : values_.front();
  }

  bool is_zero() const;
  double sup_abs() const { return sup_abs_; }
  // Nonincreasing upper envelope for sup_{t >= x} |u(t)|; +inf for an
  // unbounded right rule.
  double sup_abs_from(double x) const;
  // Largest |slope| of the model over [a,b] (left/right rules included).
  double max_abs_slope(double a, double b) const;

  // Radius beyond which u is identically zero (compact) or given purely by
  // the right envelope.
  double extent() const { return nodes_.back(); }

  // u - c, with left/right rules adjusted consistently.  When c matches the
  // model's own limit at 0 to ~1e-6 relative the shift is snapped onto that
  // limit, so the difference vanishes identically near 0 instead of leaving
  // non-integrable dust from extrapolation noise.
  GridFunction shifted(double c) const;

  // Same function on nodes plus midpoints (used to carry operator outputs).
  std::vector<double> refined_nodes() const;

 private:
  std::vector<double> nodes_, values_;
  LeftRule left_;
  RightRule right_;
  std::vector<double> prefix_; // integral over (0, x_i]
  std::vector<double> suffix_max_; // max |values| from i on
  double sup_abs_ = 0.0;
  double min_spacing_ = 0.0;

  // region index: -1 left of x1, i for [x_i, x_i+1), n-1 for [xn, inf)
  long locate(double x) const;
  double region_delta(long r, double pos, double d) const;
  double right_value(double x) const;
  double left_kappa() const;
};

} // namespace orlhardy

#endif
