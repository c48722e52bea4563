#include "orlhardy/young.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "orlhardy/errors.hpp"
#include "orlhardy/gauss.hpp"

namespace orlhardy {

// ---------------------------------------------------------------------------
// G table: cubic Hermite interpolation of y -> G(e^y) on a uniform log grid.
// Node values come from cumulative composite Gauss-Legendre integration of g
// (cells span ~1/1000 of a decade, so each is near-exact); node derivatives
// dG/dy = t g(t) are exact.  Interpolation error is ~h^4/384 * |F''''| which
// sits well below 1e-10 relative at 1000 points per decade.
// ---------------------------------------------------------------------------
struct YoungFunction::GTable {
  double y0 = 0.0;
  double dy = 0.0;
  double t_min = 0.0;
  double t_max = 0.0;
  std::vector<double> G;  // node values
  std::vector<double> D;  // node derivatives in y: t*g(t)
};

namespace {
constexpr double kTableTMin = 1e-12;
constexpr double kTableTMax = 1e12;
constexpr int kTablePerDecade = 1000;
} // namespace

double YoungFunction::g_raw(double t) const {
  switch (kind_) {
    case YoungKind::Power:
      return std::pow(t, param_p_ - 1.0);
    case YoungKind::LogPerturbed:
      return std::pow(t, param_a_) * std::log(param_b_ + param_c_ * t);
    case YoungKind::Custom:
      return custom_g_(t);
  }
  return 0.0;
}

double YoungFunction::g(double t) const {
  if (t < 0.0) throw PreconditionError("young: g requires t >= 0");
  if (t == 0.0) return 0.0;
  return g_raw(t);
}

double YoungFunction::integrate_g(double lo, double hi) const {
  // Composite GL16 on geometric cells (ratio <= 2).
  double total = 0.0;
  double a = lo;
  auto f = [this](double t) { return g_raw(t); };
  while (a < hi) {
    double b = std::min(hi, a * 2.0);
    if (b <= a) b = hi;
    total += gauss16_on(f, a, b);
    a = b;
  }
  return total;
}

double YoungFunction::series_G_small(double t) const {
  // G(t) = log(b) t^{a+1}/(a+1) + sum_k (-1)^{k+1} (c/b)^k t^{a+1+k}/(k(a+1+k)),
  // from expanding log(b + c s) = log b + log(1 + c s / b).  Converges fast
  // for c t / b << 1, which is the only place it is used.
  const double a = param_a_, b = param_b_, c = param_c_;
  double total = std::log(b) * std::pow(t, a + 1.0) / (a + 1.0);
  const double r = c * t / b;
  double rk = 1.0;
  for (int k = 1; k <= 30; ++k) {
    rk *= r;
    const double term = ((k % 2) ? 1.0 : -1.0) * rk * std::pow(t, a + 1.0) /
                        (k * (a + 1.0 + k));
    total += term;
    if (std::abs(term) < 1e-18 * std::abs(total)) break;
  }
  return total;
}

void YoungFunction::build_table() {
  auto tbl = std::make_shared<GTable>();
  tbl->t_min = kTableTMin;
  tbl->t_max = kTableTMax;
  tbl->y0 = std::log(kTableTMin);
  const double y1 = std::log(kTableTMax);
  const std::size_t ncells = static_cast<std::size_t>(
      kTablePerDecade * std::round((y1 - tbl->y0) / std::log(10.0)));
  tbl->dy = (y1 - tbl->y0) / static_cast<double>(ncells);
  tbl->G.resize(ncells + 1);
  tbl->D.resize(ncells + 1);

  double base;
  if (kind_ == YoungKind::LogPerturbed) {
    base = series_G_small(kTableTMin);
  } else {
    // Graded integration toward 0; the remainder below t_min*2^-80 is
    // smaller than G(t_min) * 2^{-80 p-}.
    base = 0.0;
    double lo = kTableTMin * std::pow(0.5, 80);
    base = integrate_g(lo, kTableTMin);
  }

  double t_prev = kTableTMin;
  tbl->G[0] = base;
  tbl->D[0] = kTableTMin * g_raw(kTableTMin);
  double carry = 0.0; // Kahan compensation for the cumulative sum
  double acc = base;
  for (std::size_t k = 1; k <= ncells; ++k) {
    const double t_k = std::exp(tbl->y0 + tbl->dy * static_cast<double>(k));
    const double inc = gauss16_on([this](double t) { return g_raw(t); }, t_prev, t_k);
    const double y = inc - carry;
    const double s = acc + y;
    carry = (s - acc) - y;
    acc = s;
    tbl->G[k] = acc;
    tbl->D[k] = t_k * g_raw(t_k);
    t_prev = t_k;
  }
  table_ = std::move(tbl);
}

double YoungFunction::G(double t) const {
  if (t < 0.0) throw PreconditionError("young: G requires t >= 0");
  if (t == 0.0) return 0.0;
  if (kind_ == YoungKind::Power) {
    return std::pow(t, param_p_) / param_p_;
  }
  if (kind_ == YoungKind::Custom && custom_G_) return custom_G_(t);

  const GTable& tbl = *table_;
  if (t < tbl.t_min) {
    if (kind_ == YoungKind::LogPerturbed) return series_G_small(t);
    // local power model anchored at t_min; the region is dominated by the
    // p- growth so the relative error is negligible where this is used
    const double p_loc = tbl.D[0] / tbl.G[0];
    return tbl.G[0] * std::pow(t / tbl.t_min, p_loc);
  }
  if (t > tbl.t_max) {
    return tbl.G.back() + integrate_g(tbl.t_max, t);
  }
  const double y = std::log(t);
  double u = (y - tbl.y0) / tbl.dy;
  std::size_t k = static_cast<std::size_t>(u);
  if (k >= tbl.G.size() - 1) k = tbl.G.size() - 2;
  const double th = u - static_cast<double>(k);
  const double h = tbl.dy;
  const double g0 = tbl.G[k], g1 = tbl.G[k + 1];
  const double d0 = tbl.D[k], d1 = tbl.D[k + 1];
  const double th2 = th * th, th3 = th2 * th;
  return (2.0 * th3 - 3.0 * th2 + 1.0) * g0 + (th3 - 2.0 * th2 + th) * h * d0 +
         (-2.0 * th3 + 3.0 * th2) * g1 + (th3 - th2) * h * d1;
}

double YoungFunction::psi(double x) const {
  if (x < 0.0) throw PreconditionError("young: psi requires x >= 0");
  return x >= 1.0 ? std::pow(x, p_plus_) : std::pow(x, p_minus_);
}

double YoungFunction::phi(double x) const {
  if (x < 0.0) throw PreconditionError("young: phi requires x >= 0");
  return x >= 1.0 ? std::pow(x, 1.0 / p_minus_) : std::pow(x, 1.0 / p_plus_);
}

YoungFunction YoungFunction::power(double p) {
  if (!(p > 1.0) || !std::isfinite(p))
    throw PreconditionError("young: power kind requires p > 1");
  YoungFunction F;
  F.kind_ = YoungKind::Power;
  F.name_ = "power(p=" + std::to_string(p) + ")";
  F.param_p_ = p;
  F.p_minus_ = p;
  F.p_plus_ = p;
  return F;
}

YoungFunction YoungFunction::log_perturbed(double a, double b, double c) {
  if (!(a > 0.0) || !(b >= 1.0) || !(c > 0.0))
    throw PreconditionError("young: log_perturbed requires a > 0, b >= 1, c > 0");
  YoungFunction F;
  F.kind_ = YoungKind::LogPerturbed;
  F.name_ = "log_perturbed(a=" + std::to_string(a) + ",b=" + std::to_string(b) +
            ",c=" + std::to_string(c) + ")";
  F.param_a_ = a;
  F.param_b_ = b;
  F.param_c_ = c;
  F.p_minus_ = 1.0 + a;
  F.p_plus_ = 2.0 + a;
  F.build_table();
  return F;
}

YoungFunction YoungFunction::custom(std::string name, std::function<double(double)> g,
                                    double p_minus, double p_plus,
                                    std::function<double(double)> G) {
  if (!g) throw PreconditionError("young: custom kind requires a density g");
  if (!(p_minus > 1.0) || !(p_plus >= p_minus))
    throw PreconditionError("young: custom kind requires 1 < p- <= p+");
  YoungFunction F;
  F.kind_ = YoungKind::Custom;
  F.name_ = std::move(name);
  F.custom_g_ = std::move(g);
  F.custom_G_ = std::move(G);
  F.p_minus_ = p_minus;
  F.p_plus_ = p_plus;
  if (!F.custom_G_) F.build_table();
  return F;
}

// ---------------------------------------------------------------------------

double conjugate(const YoungFunction& F, double w) {
  if (w < 0.0) throw PreconditionError("conjugate: w >= 0 required");
  if (w == 0.0) return 0.0;

  double lo = 1.0, hi = 1.0;
  int guard = 0;
  while (F.g(hi) < w) {
    hi *= 2.0;
    if (++guard > 2000 || !std::isfinite(hi))
      throw NonConvergenceError("conjugate: no upper bracket for g(t)=w", lo, hi);
  }
  guard = 0;
  while (F.g(lo) > w) {
    lo *= 0.5;
    if (++guard > 2000 || lo == 0.0)
      throw NonConvergenceError("conjugate: no lower bracket for g(t)=w", lo, hi);
  }
  for (int it = 0; it < 200 && (hi - lo) > 1e-15 * hi; ++it) {
    const double mid = 0.5 * (lo + hi);
    (F.g(mid) < w ? lo : hi) = mid;
  }
  const double t = 0.5 * (lo + hi);
  return t * w - F.G(t);
}

GrowthCertificate certify_growth(const YoungFunction& F, const std::vector<double>& grid) {
  if (grid.empty()) throw PreconditionError("certify_growth: empty grid");
  GrowthCertificate cert;
  cert.min_ratio = std::numeric_limits<double>::infinity();
  cert.max_ratio = -std::numeric_limits<double>::infinity();
  for (double t : grid) {
    if (!(t > 0.0)) throw PreconditionError("certify_growth: grid points must be > 0");
    const double Gt = F.G(t);
    if (Gt <= 0.0)
      throw PreconditionError("certify_growth: G(t)=0 at t>0, malformed Young function");
    const double r = t * F.g(t) / Gt;
    if (r < cert.min_ratio) { cert.min_ratio = r; cert.argmin = t; }
    if (r > cert.max_ratio) { cert.max_ratio = r; cert.argmax = t; }
  }
  cert.pass = cert.min_ratio >= F.p_minus() * (1.0 - cert.tolerance) &&
              cert.max_ratio <= F.p_plus() * (1.0 + cert.tolerance);
  return cert;
}

std::vector<double> default_growth_grid(int points_per_decade) {
  std::vector<double> grid;
  const int decades = 12; // 1e-6 .. 1e6
  const int n = decades * points_per_decade;
  grid.reserve(n + 1);
  for (int k = 0; k <= n; ++k)
    grid.push_back(std::pow(10.0, -6.0 + 12.0 * static_cast<double>(k) / n));
  return grid;
}

std::pair<bool, bool> check_G1_G2(const YoungFunction& F, double a, double t) {
  const double rel = 1e-10;
  const double Gat = F.G(a * t);
  const double Gt = F.G(t);
  const double lo = std::min(std::pow(a, F.p_minus()), std::pow(a, F.p_plus())) * Gt;
  const double hi = std::max(std::pow(a, F.p_minus()), std::pow(a, F.p_plus())) * Gt;
  const bool g1 = Gat >= lo * (1.0 - rel) - 1e-300 && Gat <= hi * (1.0 + rel) + 1e-300;
  const double lhs = F.G(a + t);
  const double rhs = std::pow(2.0, F.p_plus()) * (F.G(a) + Gt);
  const bool g2 = lhs <= rhs * (1.0 + rel) + 1e-300;
  return {g1, g2};
}

} // namespace orlhardy
