#ifndef ORLHARDY_MODULAR_HPP
#define ORLHARDY_MODULAR_HPP

#include <limits>
#include <memory>

#include "orlhardy/fractional.hpp"
#include "orlhardy/grid.hpp"
#include "orlhardy/quad.hpp"
#include "orlhardy/young.hpp"

namespace orlhardy {

// Weight applied inside a modular: none -> G(|u|); inverse_power ->
// G(|u|/x^s); shifted -> G(|u - u0|/x^s) with the subtraction performed on
// the grid before interpolation; power_mult -> G(x^e |u|) for the operator
// norms with general exponents.
struct WeightSpec {
  enum class Kind { None, InversePower, Shifted, PowerMult };
  Kind kind = Kind::None;
  double s = 0.0;
  double u0 = 0.0;
  double e = 0.0;

  static WeightSpec none() { return {}; }
  static WeightSpec inverse_power(double s);
  static WeightSpec shifted(double s, double u0);
  static WeightSpec power_mult(double e) {
    WeightSpec w;
    w.kind = Kind::PowerMult;
    w.e = e;
    return w;
  }
};

struct NormResult {
  double value = 0.0;
  double err = 0.0; // propagated uncertainty of the norm value
  bool infinite = false;
  bool converged = true;
  QuadResult modular_at_norm;
};

constexpr double kNoDomainLimit = std::numeric_limits<double>::infinity();

/// Phi_G-type modular of u with the given weight over (0, ell).
QuadResult modular(const GridFunction& u, const YoungFunction& F, const WeightSpec& w,
                   double tol, double ell = kNoDomainLimit);

/// Luxemburg norm inf{lambda : Phi(u/lambda) <= 1}, bisection on a frozen
/// quadrature that is re-adapted once near the root.  |Phi(u/l*) - 1| <=
/// 10 tol at the returned l*.  Returns 0 for u == 0; sets infinite when no
/// scale brings the modular below 1.
NormResult luxemburg_norm(const GridFunction& u, const YoungFunction& F,
                          const WeightSpec& w, double tol, double ell = kNoDomainLimit);

/// Norm of the epsilon-scaled modular inf{lambda : eps*Phi(u/lambda) <= 1}.
NormResult scaled_norm(const GridFunction& u, const YoungFunction& F, double eps,
                       double tol);

/// Fractional modular Phi_{s,G}(u) over (0,inf)^2.
QuadResult fractional_modular(const GridFunction& u, const YoungFunction& F, double s,
                              double tol);

/// Gagliardo (s,G) seminorm: Luxemburg construction over the fractional
/// modular.
NormResult gagliardo_seminorm(const GridFunction& u, const YoungFunction& F, double s,
                              double tol, const FractionalOptions* opt = nullptr);

// Shared solver: anything that can evaluate lambda -> Phi(u/lambda) and
// re-adapt its quadrature at a given scale.
class ScalableModular {
 public:
  virtual ~ScalableModular() = default;
  virtual void rebuild(double lambda) = 0;
  virtual QuadResult eval(double lambda) const = 0;
};

NormResult luxemburg_solve(ScalableModular& M, double tol, double target,
                           double p_minus);

} // namespace orlhardy

#endif
