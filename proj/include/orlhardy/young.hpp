#ifndef ORLHARDY_YOUNG_HPP
#define ORLHARDY_YOUNG_HPP

#include <functional>
#include <memory>
#include <string>
#include <utility>
#include <vector>

namespace orlhardy {

enum class YoungKind { Power, LogPerturbed, Custom };

/// A Young function G with density g = G', certified growth exponents
/// 1 < p_minus <= t g(t)/G(t) <= p_plus.  Immutable and cheap to copy;
/// safe to share across threads.
///
/// Built-in families:
///   power(p):              g(t) = t^{p-1},            G(t) = t^p / p
///   log_perturbed(a,b,c):  g(t) = t^a log(b + c t),   G by high-accuracy
///                          quadrature cached in a log-spaced Hermite table
class YoungFunction {
 public:
  static YoungFunction power(double p);
  static YoungFunction log_perturbed(double a, double b, double c);
  // Custom density g (strictly increasing, g(0)=0) with declared exponents.
  // G is integrated numerically unless a closed form is supplied.
  static YoungFunction custom(std::string name, std::function<double(double)> g,
                              double p_minus, double p_plus,
                              std::function<double(double)> G = {});

  double G(double t) const;
  double g(double t) const;

  double p_minus() const { return p_minus_; }
  double p_plus() const { return p_plus_; }
  YoungKind kind() const { return kind_; }
  const std::string& name() const { return name_; }

  // Power-kind parameter; only meaningful when kind() == Power.
  double power_exponent() const { return param_p_; }

  // psi_G(x) = x^{p+} for x >= 1, x^{p-} for x < 1.
  double psi(double x) const;
  // phi_G(x) = x^{1/p-} for x >= 1, x^{1/p+} for x < 1.
  double phi(double x) const;

 private:
  YoungFunction() = default;

  YoungKind kind_ = YoungKind::Power;
  std::string name_;
  double p_minus_ = 2.0, p_plus_ = 2.0;
  double param_p_ = 2.0;                      // power kind
  double param_a_ = 1.0, param_b_ = 2.0, param_c_ = 1.0; // log-perturbed kind
  std::function<double(double)> custom_g_;
  std::function<double(double)> custom_G_;

  struct GTable;                 // Hermite table of G on a log grid
  std::shared_ptr<const GTable> table_;

  double integrate_g(double lo, double hi) const; // composite GL16, geometric cells
  double g_raw(double t) const;
  double series_G_small(double t) const;          // log-perturbed, t below table
  void build_table();
};

/// Convex conjugate of G at w: sup_{t>0} (t w - G(t)), computed by solving
/// g(t) = w with a monotone bracketed bisection.  Returns 0 at w = 0.
double conjugate(const YoungFunction& F, double w);

struct GrowthCertificate {
  double min_ratio = 0.0;
  double max_ratio = 0.0;
  double argmin = 0.0;
  double argmax = 0.0;
  double tolerance = 1e-10; // relative
  bool pass = false;
};

/// Scans t*g(t)/G(t) over the grid and checks the result against the
/// declared exponents with 1e-10 relative tolerance.
GrowthCertificate certify_growth(const YoungFunction& F, const std::vector<double>& grid);

/// Default certification grid: log-spaced, 1e-6 .. 1e6.
std::vector<double> default_growth_grid(int points_per_decade = 40);

/// (G1, G2) from the standard Young-function comparison lemma:
///   min(a^{p-},a^{p+}) G(t) <= G(a t) <= max(a^{p-},a^{p+}) G(t)
///   G(a+t) <= 2^{p+} (G(a) + G(t))
/// each verified with 1e-10 relative tolerance.
std::pair<bool, bool> check_G1_G2(const YoungFunction& F, double a, double t);

} // namespace orlhardy

#endif
