#include "orlhardy/eigenproblem.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>

#include "orlhardy/errors.hpp"
#include "orlhardy/gauss.hpp"
#include "orlhardy/hardy.hpp"

namespace orlhardy {

namespace {
constexpr double kInf = std::numeric_limits<double>::infinity();

// small fixed Gauss rules on [0,1]
struct UnitRule {
  double x[8];
  double w[8];
  std::size_t n;
};

// Gauss-Legendre on [0,1], generated by the same Newton construction as
// gauss8/gauss16.
UnitRule small_rule(std::size_t n) {
  UnitRule r{};
  r.n = n;
  for (std::size_t i = 0; i < (n + 1) / 2; ++i) {
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
    const double wi = 2.0 / ((1.0 - z * z) * pp * pp);
    r.x[i] = 0.5 * (1.0 - z);
    r.x[n - 1 - i] = 0.5 * (1.0 + z);
    r.w[i] = 0.5 * wi;
    r.w[n - 1 - i] = 0.5 * wi;
  }
  return r;
}

const UnitRule& rule4() {
  static const UnitRule r = small_rule(4);
  return r;
}
const UnitRule& rule6() {
  static const UnitRule r = small_rule(6);
  return r;
}
const UnitRule& rule8() {
  static const UnitRule r = small_rule(8);
  return r;
}

} // namespace

NonlocalForm::NonlocalForm(DiscreteSpace sp, const YoungFunction& F, double s,
                           ExecMode mode)
    : sp_(sp), F_(&F), s_(s), mode_(mode) {
  if (!(sp_.a > 0.0 && sp_.b > sp_.a))
    throw PreconditionError("eigen: need 0 < a < b");
  if (sp_.n < 2) throw PreconditionError("eigen: need at least 2 interior nodes");
  if (!(s > 0.0 && s < 1.0)) throw PreconditionError("eigen: s must lie in (0,1)");
  far_Y_ = 16384.0 * sp_.diameter();
  build();
}

void NonlocalForm::build() {
  const double h = sp_.h();
  const long nel = static_cast<long>(sp_.n) + 1;
  ex_.clear();
  ey_.clear();
  thx_.clear();
  thy_.clear();
  rs_.clear();
  w_.clear();

  auto push = [&](std::int32_t ex, double thx, std::int32_t ey, double thy, double r,
                  double weight) {
    ex_.push_back(ex);
    thx_.push_back(thx);
    ey_.push_back(ey);
    thy_.push_back(thy);
    rs_.push_back(std::pow(r, -s_));
    w_.push_back(weight);
  };

  const UnitRule& g4 = rule4();
  const UnitRule& g6 = rule6();
  const UnitRule& g8 = rule8();

  // A. same element: int_{K x K} = 2 int_0^h (h - t) f(t) dt
  for (long e = 0; e < nel; ++e) {
    double t_hi = h;
    for (int lvl = 0; lvl < 60; ++lvl) {
      const double t_lo = 0.5 * t_hi;
      for (std::size_t q = 0; q < g8.n; ++q) {
        const double t = t_lo + (t_hi - t_lo) * g8.x[q];
        const double wq = 2.0 * (h - t) * (t_hi - t_lo) * g8.w[q] / t;
        push(static_cast<std::int32_t>(e), t / h, static_cast<std::int32_t>(e), 0.0, t,
             wq);
      }
      t_hi = t_lo;
    }
  }

  // B. adjacent pairs, parametrized by the difference t = y - x
  for (long e = 0; e + 1 < nel; ++e) {
    const double V = sp_.node(static_cast<std::size_t>(e) + 1);
    const double xl = sp_.node(static_cast<std::size_t>(e));
    const double xr = sp_.node(static_cast<std::size_t>(e) + 2);
    double t_hi = 2.0 * h;
    for (int lvl = 0; lvl < 50; ++lvl) {
      const double t_lo = 0.5 * t_hi;
      for (std::size_t qt = 0; qt < g6.n; ++qt) {
        const double t = t_lo + (t_hi - t_lo) * g6.x[qt];
        const double s0 = std::max(xl, V - t);
        const double s1 = std::min(V, xr - t);
        if (s1 <= s0) continue;
        for (std::size_t qx = 0; qx < g6.n; ++qx) {
          const double x = s0 + (s1 - s0) * g6.x[qx];
          const double wq =
              2.0 * (t_hi - t_lo) * g6.w[qt] * (s1 - s0) * g6.w[qx] / t;
          push(static_cast<std::int32_t>(e), (x - xl) / h,
               static_cast<std::int32_t>(e + 1), (x + t - V) / h, t, wq);
        }
      }
      t_hi = t_lo;
    }
  }

  // C. separated pairs, tensor rules by gap
  for (long e = 0; e < nel; ++e) {
    for (long f = e + 2; f < nel; ++f) {
      const long gap = f - e - 1;
      const UnitRule& r = gap <= 2 ? g8 : (gap <= 8 ? g6 : g4);
      const double xe = sp_.node(static_cast<std::size_t>(e));
      const double xf = sp_.node(static_cast<std::size_t>(f));
      for (std::size_t qx = 0; qx < r.n; ++qx) {
        const double x = xe + h * r.x[qx];
        for (std::size_t qy = 0; qy < r.n; ++qy) {
          const double y = xf + h * r.x[qy];
          const double t = y - x;
          const double wq = 2.0 * h * r.w[qx] * h * r.w[qy] / t;
          push(static_cast<std::int32_t>(e), r.x[qx], static_cast<std::int32_t>(f),
               r.x[qy], t, wq);
        }
      }
    }
  }

  // D. exterior strips: x in element, y beyond a or b (u(y) = 0)
  for (long e = 0; e < nel; ++e) {
    const double xl = sp_.node(static_cast<std::size_t>(e));
    for (int side = 0; side < 2; ++side) {
      // x sub-pieces, graded toward the boundary vertex when it touches it
      std::vector<std::pair<double, double>> pieces;
      const bool singular = (side == 0 && e == 0) || (side == 1 && e + 1 == nel);
      if (singular) {
        const double v = side == 0 ? sp_.a : sp_.b;
        double d = h;
        for (int lvl = 0; lvl < 40; ++lvl) {
          const double d2 = 0.5 * d;
          pieces.emplace_back(side == 0 ? v + d2 : v - d, side == 0 ? v + d : v - d2);
          d = d2;
        }
      } else {
        pieces.emplace_back(xl, xl + h);
      }
      for (const auto& [p0, p1] : pieces) {
        for (std::size_t qx = 0; qx < g6.n; ++qx) {
          const double x = p0 + (p1 - p0) * g6.x[qx];
          const double wx = (p1 - p0) * g6.w[qx];
          const double t0 = side == 0 ? x - sp_.a : sp_.b - x;
          if (!(t0 > 0.0)) continue;
          double a_t = t0;
          while (a_t < far_Y_) {
            const double b_t = std::min(far_Y_, 2.0 * a_t);
            for (std::size_t qt = 0; qt < g4.n; ++qt) {
              const double t = a_t + (b_t - a_t) * g4.x[qt];
              const double wq = 2.0 * wx * (b_t - a_t) * g4.w[qt] / t;
              push(static_cast<std::int32_t>(e), (x - xl) / h, -1, 0.0, t, wq);
            }
            a_t = b_t;
          }
        }
      }
    }
  }
}

double NonlocalForm::frac_modular(const std::vector<double>& c) const {
  const YoungFunction& F = *F_;
  const std::size_t nqp = w_.size();
  const std::size_t chunk = 8192;
  const std::size_t nblocks = (nqp + chunk - 1) / chunk;
  std::vector<double> part(nblocks, 0.0);
  for_each_block(nblocks, mode_, [&](std::size_t blk) {
    const std::size_t b0 = blk * chunk;
    const std::size_t b1 = std::min(nqp, b0 + chunk);
    double acc = 0.0;
    for (std::size_t k = b0; k < b1; ++k) {
      const double d = uval(c, ex_[k], thx_[k]) - uval(c, ey_[k], thy_[k]);
      acc += w_[k] * F.G(std::abs(d) * rs_[k]);
    }
    part[blk] = acc;
  });
  double total = 0.0;
  for (double v : part) total += v;
  return total;
}

std::vector<double> NonlocalForm::frac_gradient(const std::vector<double>& c) const {
  const YoungFunction& F = *F_;
  const std::size_t n = sp_.n;
  const std::size_t nqp = w_.size();
  const std::size_t chunk = 8192;
  const std::size_t nblocks = (nqp + chunk - 1) / chunk;
  std::vector<double> part(nblocks * n, 0.0);
  for_each_block(nblocks, mode_, [&](std::size_t blk) {
    const std::size_t b0 = blk * chunk;
    const std::size_t b1 = std::min(nqp, b0 + chunk);
    double* g = part.data() + blk * n;
    for (std::size_t k = b0; k < b1; ++k) {
      const double d = uval(c, ex_[k], thx_[k]) - uval(c, ey_[k], thy_[k]);
      if (d == 0.0) continue;
      const double a = w_[k] * F.g(std::abs(d) * rs_[k]) * rs_[k] *
                       (d > 0.0 ? 1.0 : -1.0);
      const long jxl = ex_[k], jxr = ex_[k] + 1;
      const long jyl = ey_[k], jyr = ey_[k] + 1;
      if (jxl >= 1 && jxl <= static_cast<long>(n)) g[jxl - 1] += a * (1.0 - thx_[k]);
      if (ex_[k] >= 0 && jxr >= 1 && jxr <= static_cast<long>(n))
        g[jxr - 1] += a * thx_[k];
      if (ey_[k] >= 0) {
        if (jyl >= 1 && jyl <= static_cast<long>(n)) g[jyl - 1] -= a * (1.0 - thy_[k]);
        if (jyr >= 1 && jyr <= static_cast<long>(n)) g[jyr - 1] -= a * thy_[k];
      }
    }
  });
  std::vector<double> grad(n, 0.0);
  for (std::size_t blk = 0; blk < nblocks; ++blk)
    for (std::size_t j = 0; j < n; ++j) grad[j] += part[blk * n + j];
  return grad;
}

double NonlocalForm::pairing(const std::vector<double>& cu,
                             const std::vector<double>& cv) const {
  const YoungFunction& F = *F_;
  const std::size_t nqp = w_.size();
  const std::size_t chunk = 8192;
  const std::size_t nblocks = (nqp + chunk - 1) / chunk;
  std::vector<double> part(nblocks, 0.0);
  for_each_block(nblocks, mode_, [&](std::size_t blk) {
    const std::size_t b0 = blk * chunk;
    const std::size_t b1 = std::min(nqp, b0 + chunk);
    double acc = 0.0;
    for (std::size_t k = b0; k < b1; ++k) {
      const double du = uval(cu, ex_[k], thx_[k]) - uval(cu, ey_[k], thy_[k]);
      if (du == 0.0) continue;
      const double dv = uval(cv, ex_[k], thx_[k]) - uval(cv, ey_[k], thy_[k]);
      acc += w_[k] * F.g(std::abs(du) * rs_[k]) * (du > 0.0 ? 1.0 : -1.0) * dv * rs_[k];
    }
    part[blk] = acc;
  });
  double total = 0.0;
  for (double v : part) total += v;
  return total;
}

namespace {

// integral over one element of fn(u(x), x), splitting at a sign change of
// the linear u
template <class Fn>
double element_integral(double x0, double h, double cl, double cr, const Fn& fn) {
  const UnitRule& r = rule8();
  auto seg = [&](double a, double b) {
    double acc = 0.0;
    for (std::size_t q = 0; q < r.n; ++q) {
      const double th = a + (b - a) * r.x[q];
      const double u = cl * (1.0 - th) + cr * th;
      acc += (b - a) * r.w[q] * fn(u, x0 + th * h);
    }
    return acc * h;
  };
  if (cl * cr < 0.0) {
    const double th0 = cl / (cl - cr);
    return seg(0.0, th0) + seg(th0, 1.0);
  }
  return seg(0.0, 1.0);
}

} // namespace

double NonlocalForm::local_modular(const std::vector<double>& c, bool weighted) const {
  const YoungFunction& F = *F_;
  const double h = sp_.h();
  double total = 0.0;
  for (long e = 0; e <= static_cast<long>(sp_.n); ++e) {
    const double cl = coeff(c, e), cr = coeff(c, e + 1);
    if (cl == 0.0 && cr == 0.0) continue;
    total += element_integral(
        sp_.node(static_cast<std::size_t>(e)), h, cl, cr, [&](double u, double x) {
          const double Wv = weighted ? std::abs(u) * std::pow(x, -s_) : std::abs(u);
          return F.G(Wv);
        });
  }
  return total;
}

std::vector<double> NonlocalForm::local_gradient(const std::vector<double>& c,
                                                 bool weighted) const {
  const YoungFunction& F = *F_;
  const double h = sp_.h();
  const std::size_t n = sp_.n;
  std::vector<double> grad(n, 0.0);
  const UnitRule& r = rule8();
  for (long e = 0; e <= static_cast<long>(n); ++e) {
    const double cl = coeff(c, e), cr = coeff(c, e + 1);
    auto seg = [&](double a, double b) {
      for (std::size_t q = 0; q < r.n; ++q) {
        const double th = a + (b - a) * r.x[q];
        const double u = cl * (1.0 - th) + cr * th;
        if (u == 0.0) continue;
        const double x = sp_.node(static_cast<std::size_t>(e)) + th * h;
        const double wgt = weighted ? std::pow(x, -s_) : 1.0;
        const double a_ = (b - a) * r.w[q] * h * F.g(std::abs(u) * wgt) * wgt *
                          (u > 0.0 ? 1.0 : -1.0);
        if (e >= 1) grad[static_cast<std::size_t>(e) - 1] += a_ * (1.0 - th);
        if (e + 1 <= static_cast<long>(n)) grad[static_cast<std::size_t>(e)] += a_ * th;
      }
    };
    if (cl * cr < 0.0) {
      const double th0 = cl / (cl - cr);
      seg(0.0, th0);
      seg(th0, 1.0);
    } else {
      seg(0.0, 1.0);
    }
  }
  return grad;
}

double NonlocalForm::local_dual(const std::vector<double>& c, bool weighted) const {
  const YoungFunction& F = *F_;
  const double h = sp_.h();
  double total = 0.0;
  for (long e = 0; e <= static_cast<long>(sp_.n); ++e) {
    const double cl = coeff(c, e), cr = coeff(c, e + 1);
    if (cl == 0.0 && cr == 0.0) continue;
    total += element_integral(
        sp_.node(static_cast<std::size_t>(e)), h, cl, cr, [&](double u, double x) {
          const double Wv = weighted ? std::abs(u) * std::pow(x, -s_) : std::abs(u);
          return F.g(Wv) * Wv;
        });
  }
  return total;
}

double NonlocalForm::far_tail_bound(const std::vector<double>& c) const {
  double S = 0.0;
  for (double v : c) S = std::max(S, std::abs(v));
  if (S == 0.0) return 0.0;
  const double pm = F_->p_minus();
  return 4.0 * sp_.diameter() * F_->G(S) * std::pow(far_Y_, -s_ * pm) / (s_ * pm);
}

// ---------------------------------------------------------------------------

std::vector<double> project_to_constraint(const NonlocalForm& form,
                                          const std::vector<double>& c, double alpha,
                                          bool weighted) {
  if (!(alpha > 0.0)) throw PreconditionError("project: alpha must be > 0");
  double norm2 = 0.0;
  for (double v : c) norm2 += v * v;
  if (norm2 == 0.0) throw PreconditionError("project: cannot project the zero function");
  const double phi0 = form.local_modular(c, weighted);
  if (!(phi0 > 0.0)) throw PreconditionError("project: modular vanished");

  const double pbar = 0.5 * (form.young().p_minus() + form.young().p_plus());
  double t = std::pow(alpha / phi0, 1.0 / pbar);
  auto phi_of = [&](double tt) {
    std::vector<double> tmp(c);
    for (double& v : tmp) v *= tt;
    return form.local_modular(tmp, weighted);
  };
  double lo = t, hi = t;
  int guard = 0;
  while (phi_of(hi) < alpha) {
    hi *= 2.0;
    if (++guard > 200) throw NonConvergenceError("project: no upper bracket", lo, hi);
  }
  guard = 0;
  while (phi_of(lo) > alpha) {
    lo *= 0.5;
    if (++guard > 200) throw NonConvergenceError("project: no lower bracket", lo, hi);
  }
  for (int it = 0; it < 200 && (hi - lo) > 1e-13 * hi; ++it) {
    const double mid = 0.5 * (lo + hi);
    (phi_of(mid) < alpha ? lo : hi) = mid;
  }
  const double scale = 0.5 * (lo + hi);
  std::vector<double> out(c);
  for (double& v : out) v *= scale;
  return out;
}

namespace {

std::vector<double> make_seed(const DiscreteSpace& sp, std::size_t seed_index) {
  const std::size_t n = sp.n;
  std::vector<double> c(n);
  switch (seed_index) {
    case 0:
      for (std::size_t j = 0; j < n; ++j)
        c[j] = std::sin(M_PI * static_cast<double>(j + 1) / static_cast<double>(n + 1));
      break;
    case 1: {
      std::mt19937 rng(1234501u);
      std::uniform_real_distribution<double> d(0.2, 1.0);
      for (double& v : c) v = d(rng);
      break;
    }
    case 2: {
      std::mt19937 rng(1234502u);
      std::uniform_real_distribution<double> d(0.3, 1.0);
      for (std::size_t j = 0; j < n; ++j) c[j] = (j % 2 ? -1.0 : 1.0) * d(rng);
      break;
    }
    case 3:
    case 4: {
      const double center = seed_index == 3 ? static_cast<double>(n) / 3.0
                                            : 2.0 * static_cast<double>(n) / 3.0;
      const double width = std::max(2.0, static_cast<double>(n) / 8.0);
      for (std::size_t j = 0; j < n; ++j) {
        const double z = (static_cast<double>(j) - center) / width;
        c[j] = std::exp(-z * z);
      }
      break;
    }
    default: {
      std::mt19937 rng(1234500u + static_cast<unsigned>(seed_index));
      std::uniform_real_distribution<double> d(-1.0, 1.0);
      for (double& v : c) v = d(rng);
      break;
    }
  }
  return c;
}

struct RestartResult {
  double quotient = kInf;
  std::vector<double> c;
  long iters = 0;
  double grad_norm = 0.0;
  bool converged = false;
};

RestartResult run_descent(const NonlocalForm& form, double alpha, bool weighted,
                          std::size_t seed_index, std::size_t max_iter, double qtol) {
  RestartResult res;
  std::vector<double> u =
      project_to_constraint(form, make_seed(form.space(), seed_index), alpha, weighted);
  double R = form.frac_modular(u) / alpha;
  double eta = 0.0;
  int stall = 0;
  std::size_t it = 0;
  for (; it < max_iter; ++it) {
    const std::vector<double> gs = form.frac_gradient(u);
    const std::vector<double> gl = form.local_gradient(u, weighted);
    std::vector<double> d(u.size());
    double gnorm2 = 0.0, unorm2 = 0.0;
    for (std::size_t j = 0; j < u.size(); ++j) {
      d[j] = (gs[j] - R * gl[j]) / alpha;
      gnorm2 += d[j] * d[j];
      unorm2 += u[j] * u[j];
    }
    const double gnorm = std::sqrt(gnorm2);
    res.grad_norm = gnorm;
    if (gnorm <= 1e-11 * std::max(1.0, R)) {
      res.converged = true;
      break;
    }
    if (eta == 0.0) eta = 0.5 * std::sqrt(unorm2) / (gnorm + 1e-300);

    bool accepted = false;
    for (int bt = 0; bt < 50; ++bt) {
      std::vector<double> trial(u);
      for (std::size_t j = 0; j < u.size(); ++j) trial[j] -= eta * d[j];
      bool ok = true;
      double Rt = kInf;
      try {
        trial = project_to_constraint(form, trial, alpha, weighted);
        Rt = form.frac_modular(trial) / alpha;
      } catch (const PreconditionError&) {
        ok = false;
      }
      if (ok && Rt < R - 1e-14 * std::abs(R)) {
        const double drop = (R - Rt) / std::max(R, 1e-300);
        u = std::move(trial);
        R = Rt;
        accepted = true;
        eta *= 2.0;
        if (drop < qtol) {
          if (++stall >= 3) res.converged = true;
        } else {
          stall = 0;
        }
        break;
      }
      eta *= 0.5;
    }
    if (!accepted) {
      res.converged = gnorm <= 1e-6 * std::max(1.0, R);
      break;
    }
    if (res.converged) break;
  }
  res.quotient = R;
  res.c = std::move(u);
  res.iters = static_cast<long>(it);
  return res;
}

} // namespace

EigenSolution minimize_quotient(const NonlocalForm& form, double alpha,
                                const EigenOptions& opt) {
  if (!(alpha > 0.0)) throw PreconditionError("minimize: alpha must be > 0");
  const std::size_t R = std::max<std::size_t>(1, opt.restarts);
  std::vector<RestartResult> results(R);
  for_each_block(R, opt.mode, [&](std::size_t r) {
    results[r] = run_descent(form, alpha, opt.weighted, r, opt.max_iter,
                             opt.quotient_tol);
  });
  std::size_t best = 0;
  for (std::size_t r = 1; r < R; ++r)
    if (results[r].quotient < results[best].quotient) best = r;

  EigenSolution sol;
  sol.alpha = alpha;
  sol.weighted = opt.weighted;
  sol.coefficients = results[best].c;
  sol.Lambda_alpha = results[best].quotient;
  sol.iterations = results[best].iters;
  sol.best_seed = static_cast<int>(best);
  sol.final_grad_norm = results[best].grad_norm;
  sol.converged = results[best].converged;
  sol.lambda_alpha = extract_lambda(form, sol.coefficients, opt.weighted);
  sol.bound_checks = check_lower_bounds(form, sol);
  return sol;
}

double extract_lambda(const NonlocalForm& form, const std::vector<double>& c,
                      bool weighted, double tol) {
  const double num = form.pairing(c, c);
  const double den = form.local_dual(c, weighted);
  if (!(den > tol)) throw PreconditionError("extract_lambda: degenerate solution");
  return num / den;
}

std::vector<BoundCheck> check_lower_bounds(const NonlocalForm& form,
                                           const EigenSolution& sol) {
  std::vector<BoundCheck> checks;
  const YoungFunction& F = form.young();
  const double pm = F.p_minus(), pp = F.p_plus();
  const HardyConstants k = compute_constants(F, form.s());
  const double slack = 1.0 + 1e-9;

  double lb;
  if (sol.weighted)
    lb = 1.0 / k.C_H;
  else
    lb = 1.0 / (F.psi(form.space().diameter()) * k.C_H);
  checks.push_back({sol.weighted ? "weighted_lower_bound" : "dirichlet_lower_bound", lb,
                    sol.Lambda_alpha, lb <= sol.Lambda_alpha * slack});
  checks.push_back({"comparability_lo", (pm / pp) * sol.Lambda_alpha, sol.lambda_alpha,
                    (pm / pp) * sol.Lambda_alpha <= sol.lambda_alpha * slack});
  checks.push_back({"comparability_hi", sol.lambda_alpha,
                    (pp / pm) * sol.Lambda_alpha,
                    sol.lambda_alpha <= (pp / pm) * sol.Lambda_alpha * slack});
  return checks;
}

} // namespace orlhardy
