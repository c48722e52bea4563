#include "orlhardy/gauss.hpp"

#include <cmath>

namespace orlhardy {

namespace {

// Newton iteration on P_n, initial guesses from the Chebyshev-like
// asymptotic formula.  Classic gauleg construction.
GaussRule make_rule(std::size_t n) {
  GaussRule rule;
  rule.n = n;
  const std::size_t m = (n + 1) / 2;
  for (std::size_t i = 0; i < m; ++i) {
    double z = std::cos(M_PI * (static_cast<double>(i) + 0.75) /
                        (static_cast<double>(n) + 0.5));
    double pp = 0.0;
    for (int it = 0; it < 100; ++it) {
      double p0 = 1.0, p1 = 0.0;
      for (std::size_t j = 0; j < n; ++j) {
        const double p2 = p1;
        p1 = p0;
        p0 = ((2.0 * j + 1.0) * z * p1 - static_cast<double>(j) * p2) /
             (static_cast<double>(j) + 1.0);
      }
      pp = static_cast<double>(n) * (z * p0 - p1) / (z * z - 1.0);
      const double dz = p0 / pp;
      z -= dz;
      if (std::abs(dz) < 1e-16) break;
    }
    rule.x[i] = -z;
    rule.x[n - 1 - i] = z;
    rule.w[i] = 2.0 / ((1.0 - z * z) * pp * pp);
    rule.w[n - 1 - i] = rule.w[i];
  }
  return rule;
}

} // namespace

const GaussRule& gauss8() {
  static const GaussRule r = make_rule(8);
  return r;
}

const GaussRule& gauss16() {
  static const GaussRule r = make_rule(16);
  return r;
}

} // namespace orlhardy
