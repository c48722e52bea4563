#ifndef ORLHARDY_FRACTIONAL_HPP
#define ORLHARDY_FRACTIONAL_HPP

#include <cstddef>
#include <vector>

#include "orlhardy/grid.hpp"
#include "orlhardy/parallel.hpp"
#include "orlhardy/quad.hpp"
#include "orlhardy/young.hpp"

namespace orlhardy {

struct FractionalOptions {
  double tol = 1e-6;          // absolute, resolved region
  double h_truncation = 1e6;  // outer-difference radius; comparison-lemma bound beyond
  std::size_t max_cells = 24000;
  ExecMode mode = default_exec_mode();
};

/// Frozen quadrature of lambda -> Phi_{s,G}(u/lambda) over (0,inf)^2.
///
/// The double integral is reduced by y = x+h (h > 0, doubled by symmetry)
/// to cells in (x,h), geometrically graded toward h = 0 and x = 0, with an
/// embedded GL16/GL8 pair per cell.  rebuild(lambda) adapts the cells for
/// the integrand at that scale and freezes the quadrature points
/// q = |u(x)-u(y)| / |x-y|^s, so later eval(lambda) calls are single passes
/// of G(q/lambda) against fixed weights.  Contributions below h_min, below
/// delta_x, and beyond the truncation radii enter as closed-form closure
/// terms and bounds (value/abs_error/tail_bound respectively).
class FractionalCache {
 public:
  FractionalCache(const GridFunction& u, const YoungFunction& F, double s,
                  FractionalOptions opt = {});

  void rebuild(double lambda);
  QuadResult eval(double lambda) const;

  std::size_t cell_count() const { return ncells_; }
  const FractionalOptions& options() const { return opt_; }

 private:
  const GridFunction* u_;
  const YoungFunction* F_;
  double s_;
  FractionalOptions opt_;

  // geometry
  double X_ = 0.0, H_ = 0.0, h_min_ = 0.0, delta_x_ = 0.0;

  // frozen interior points: per cell 256 high-rule and 64 low-rule entries
  std::size_t ncells_ = 0;
  std::vector<double> q16_, c16_, q8_, c8_;
  bool built_converged_ = true;
  bool built_diverged_ = false;

  // h->0 closure: per linear piece tau = |slope| * h_min^{1-s} with value /
  // half-spread coefficients (exact bracket G(tau)/p+ <= .. <= G(tau)/p-),
  // plus bound-only entries for the rule regions
  std::vector<double> clos_tau_, clos_cval_, clos_cerr_;
  std::vector<double> closb_tau_, closb_coef_;

  // x->0 closure strips at delta_x and delta_x/2
  std::vector<double> xs_q_[2], xs_c_[2];

  // truncation-tail anchors: tail(lambda) = 2*(G(a1/l)*d1 + G(a2/l)*d2 + G(a3/l)*d3)
  double tail_a_[3] = {0, 0, 0};
  double tail_d_[3] = {0, 0, 0};
  bool tail_finite_ = true;

  void build_closures();
  void build_tails();
};

QuadResult integrate_fractional_double(const GridFunction& u, const YoungFunction& F,
                                       double s, double tol);
QuadResult integrate_fractional_double(const GridFunction& u, const YoungFunction& F,
                                       double s, const FractionalOptions& opt);

} // namespace orlhardy

#endif
