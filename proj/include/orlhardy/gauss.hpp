#ifndef ORLHARDY_GAUSS_HPP
#define ORLHARDY_GAUSS_HPP

#include <array>
#include <cstddef>

namespace orlhardy {

// Gauss-Legendre rules on [-1,1].  Nodes and weights are generated at first
// use by Newton iteration on the Legendre polynomial, accurate to machine
// precision, so no tabulated constants enter the code.
struct GaussRule {
  std::array<double, 16> x{};
  std::array<double, 16> w{};
  std::size_t n = 0;
};

const GaussRule& gauss8();
const GaussRule& gauss16();

// One embedded-pair estimate of an integral over [a,b]:
// value = GL16, err = |GL16 - GL8|.
template <class F>
void gauss_pair(const F& f, double a, double b, double& value, double& err) {
  const GaussRule& hi = gauss16();
  const GaussRule& lo = gauss8();
  const double c = 0.5 * (a + b), r = 0.5 * (b - a);
  double s16 = 0.0;
  for (std::size_t i = 0; i < hi.n; ++i) s16 += hi.w[i] * f(c + r * hi.x[i]);
  double s8 = 0.0;
  for (std::size_t i = 0; i < lo.n; ++i) s8 += lo.w[i] * f(c + r * lo.x[i]);
  value = r * s16;
  err = r * (s16 > s8 ? s16 - s8 : s8 - s16);
}

// Plain GL16 value on [a,b].
template <class F>
double gauss16_on(const F& f, double a, double b) {
  const GaussRule& hi = gauss16();
  const double c = 0.5 * (a + b), r = 0.5 * (b - a);
  double s = 0.0;
  for (std::size_t i = 0; i < hi.n; ++i) s += hi.w[i] * f(c + r * hi.x[i]);
  return r * s;
}

} // namespace orlhardy

#endif
