#ifndef ORLHARDY_EIGENPROBLEM_HPP
#define ORLHARDY_EIGENPROBLEM_HPP

#include <cstdint>
#include <string>
#include <vector>

#include "orlhardy/parallel.hpp"
#include "orlhardy/young.hpp"

namespace orlhardy {

/// Continuous piecewise-linear functions on (a,b) with n uniform interior
/// nodes, extended by zero to the rest of the line.  Coefficient vectors
/// hold the interior nodal values.
struct DiscreteSpace {
  double a = 1.0;
  double b = 2.0;
  std::size_t n = 64;

  double h() const { return (b - a) / static_cast<double>(n + 1); }
  double node(std::size_t j) const { return a + h() * static_cast<double>(j); }
  double diameter() const { return b - a; }
};

/// Frozen quadrature of the nonlocal energy over R^2 for the space above:
/// element pairs (graded toward the diagonal), exterior strips (graded
/// toward the boundary), and a comparison-lemma bound beyond the far
/// radius.  The same point set drives the modular, its nodal gradient and
/// the duality pairing, so finite differences of the modular match the
/// gradient to roundoff.
class NonlocalForm {
 public:
  NonlocalForm(DiscreteSpace sp, const YoungFunction& F, double s,
               ExecMode mode = default_exec_mode());

  std::size_t dim() const { return sp_.n; }
  const DiscreteSpace& space() const { return sp_; }
  const YoungFunction& young() const { return *F_; }
  double s() const { return s_; }
  std::size_t qp_count() const { return w_.size(); }

  double frac_modular(const std::vector<double>& c) const;
  std::vector<double> frac_gradient(const std::vector<double>& c) const;
  double pairing(const std::vector<double>& cu, const std::vector<double>& cv) const;

  // Integrals over Omega: Phi_G(u) (weighted: G(|u|/x^s)), its gradient,
  // and the duality denominator int g(W) W dx.
  double local_modular(const std::vector<double>& c, bool weighted) const;
  std::vector<double> local_gradient(const std::vector<double>& c, bool weighted) const;
  double local_dual(const std::vector<double>& c, bool weighted) const;

  double far_tail_bound(const std::vector<double>& c) const;

 private:
  DiscreteSpace sp_;
  const YoungFunction* F_;
  double s_;
  ExecMode mode_;
  double far_Y_ = 0.0;

  std::vector<std::int32_t> ex_, ey_; // element ids; -1 = exterior (u = 0)
  std::vector<double> thx_, thy_, rs_, w_;

  void build();

  double coeff(const std::vector<double>& c, long j) const {
    return (j >= 1 && j <= static_cast<long>(sp_.n)) ? c[static_cast<std::size_t>(j - 1)]
                                                     : 0.0;
  }
  double uval(const std::vector<double>& c, std::int32_t e, double th) const {
    if (e < 0) return 0.0;
    return coeff(c, e) * (1.0 - th) + coeff(c, e + 1) * th;
  }
};

struct BoundCheck {
  std::string name;
  double lhs = 0.0, rhs = 0.0;
  bool pass = false;
};

struct EigenSolution {
  double alpha = 1.0;
  std::vector<double> coefficients;
  double Lambda_alpha = 0.0; // quotient at the minimizer
  double lambda_alpha = 0.0; // Lagrange ratio of duality pairings
  long iterations = 0;
  int best_seed = -1;
  double final_grad_norm = 0.0;
  bool converged = false;
  bool weighted = false;
  std::vector<BoundCheck> bound_checks;
};

struct EigenOptions {
  std::size_t restarts = 5;
  std::size_t max_iter = 4000;
  double quotient_tol = 1e-10; // relative stall threshold
  bool weighted = false;
  ExecMode mode = default_exec_mode();
};

/// Scale c so that the (possibly weighted) local modular equals alpha.
std::vector<double> project_to_constraint(const NonlocalForm& form,
                                          const std::vector<double>& c, double alpha,
                                          bool weighted);

/// Projected gradient descent with backtracking on Phi_{s,G}/Phi_G over the
/// modular sphere, multi-start; returns the lowest quotient (ties by seed).
EigenSolution minimize_quotient(const NonlocalForm& form, double alpha,
                                const EigenOptions& opt = {});

/// lambda_alpha = <(-Delta_g)^s u, u> / int g(W) W dx.
double extract_lambda(const NonlocalForm& form, const std::vector<double>& c,
                      bool weighted, double tol = 1e-14);

/// Hardy-derived lower bound and the comparability band, evaluated on a
/// solution.
std::vector<BoundCheck> check_lower_bounds(const NonlocalForm& form,
                                           const EigenSolution& sol);

} // namespace orlhardy

#endif
