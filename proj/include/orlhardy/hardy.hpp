#ifndef ORLHARDY_HARDY_HPP
#define ORLHARDY_HARDY_HPP

#include <string>
#include <vector>

#include "orlhardy/grid.hpp"
#include "orlhardy/modular.hpp"
#include "orlhardy/quad.hpp"
#include "orlhardy/young.hpp"

namespace orlhardy {

/// Explicit constants of the one-dimensional fractional Hardy inequalities,
/// all closed forms in (s, p-, p+).  Valid in the regime s p- > 1.
struct HardyConstants {
  double s = 0.0;
  double p_minus = 0.0;
  double p_plus = 0.0;
  double c_H = 0.0;            // psi_G(p- / (s p- - 1)), local-lemma constant
  double C_doubling = 0.0;     // 2^{p+}
  double C_H = 0.0;            // C_doubling * (1 + c_H), modular constant
  double norm_const_thm = 0.0; // ((1+s) p- - 1) / (s p- - 1)
  double norm_const_cor = 0.0; // phi_G(C_H)

  // Averaging-operator norm constant (p-)' / (1 - theta (p-)'), defined for
  // theta < 1/(p-)'.
  double palmieri(double theta) const;
};

HardyConstants compute_constants(const YoungFunction& F, double s);

struct CesaroResult {
  double value = 0.0;
  double err = 0.0;
  bool converged = true;
};

/// lim_{x->0} (1/x) int_0^x u, by Aitken extrapolation of the running mean
/// at x1*8, x1*4, x1*2.
CesaroResult cesaro_limit(const GridFunction& u);

/// v(x) = u(x) - (1/x) int_0^x u, on u's mesh.  Requires the Cesaro limit
/// of u to vanish.
GridFunction v_decompose(const GridFunction& u);

/// int_0^{x_i} v(t)/t dt at the nodes of v, exact piecewise closed forms.
/// Together with v_decompose this realizes the reconstruction identity
/// u = v + int_0^x v(t)/t dt.
std::vector<double> integral_over_t(const GridFunction& v);

/// x^(theta-1) int_0^x u, on a midpoint refinement of u's mesh.
GridFunction hardy_operator(const GridFunction& u, double theta);

struct InequalityReport {
  std::string name;
  QuadResult lhs, rhs; // for norm checks: value = norm, abs_error = its uncertainty
  double constant = 1.0;
  double ratio = 0.0; // lhs.value / (constant * rhs.value)
  double budget = 0.0;
  bool pass = false;
  bool vacuous = false; // inequality carries no content for this instance
  std::string note;
};

enum class NormHardyVariant { Corollary, Theorem };

InequalityReport check_palmieri(const GridFunction& u, const YoungFunction& F,
                                double theta, double ell, double tol);
InequalityReport check_local_lemma(const GridFunction& u, const YoungFunction& F,
                                   double s, double tol);
InequalityReport check_modular_hardy(const GridFunction& u, const YoungFunction& F,
                                     double s, double tol);
InequalityReport check_norm_hardy(const GridFunction& u, const YoungFunction& F,
                                  double s, NormHardyVariant variant, double tol,
                                  const NormResult* seminorm_precomputed = nullptr);
InequalityReport check_classical_hardy(const GridFunction& u, double p, double tol);

} // namespace orlhardy

#endif
