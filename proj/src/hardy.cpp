#include "orlhardy/hardy.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "orlhardy/errors.hpp"
#include "orlhardy/gauss.hpp"

namespace orlhardy {

namespace {
constexpr double kInf = std::numeric_limits<double>::infinity();
}

double HardyConstants::palmieri(double theta) const {
  const double pc = p_minus / (p_minus - 1.0); // (p-)'
  if (!(theta < 1.0 / pc))
    throw PreconditionError("palmieri constant: requires theta < 1/(p-)'");
  return pc / (1.0 - theta * pc);
}

HardyConstants compute_constants(const YoungFunction& F, double s) {
  if (!(s > 0.0 && s < 1.0))
    throw PreconditionError("hardy constants: s must lie in (0,1)");
  const double pm = F.p_minus(), pp = F.p_plus();
  if (!(s * pm > 1.0))
    throw PreconditionError("hardy constants: out of regime, s p- <= 1");
  HardyConstants k;
  k.s = s;
  k.p_minus = pm;
  k.p_plus = pp;
  k.c_H = F.psi(pm / (s * pm - 1.0));
  k.C_doubling = std::pow(2.0, pp);
  k.C_H = k.C_doubling * (1.0 + k.c_H);
  k.norm_const_thm = ((1.0 + s) * pm - 1.0) / (s * pm - 1.0);
  k.norm_const_cor = F.phi(k.C_H);
  return k;
}

CesaroResult cesaro_limit(const GridFunction& u) {
  const double x = 8.0 * u.x_first();
  const double m1 = u.integral_to(x) / x;
  const double m2 = u.integral_to(0.5 * x) / (0.5 * x);
  const double m3 = u.integral_to(0.25 * x) / (0.25 * x);
  CesaroResult r;
  const double d1 = m2 - m1, d2 = m3 - m2;
  const double scale = std::max({std::abs(m1), std::abs(m2), std::abs(m3), 1e-300});
  if (std::abs(d2) <= 1e-13 * scale) {
    r.value = m3;
    r.err = std::abs(d2);
    return r;
  }
  const double den = d2 - d1;
  if (den == 0.0) {
    r.value = m3;
    r.err = std::abs(d2);
    r.converged = false;
    return r;
  }
  const double q = d2 / d1;
  r.value = m3 - d2 * d2 / den;
  if (!(std::abs(q) < 0.99) || !std::isfinite(r.value)) {
    r.value = m3;
    r.err = std::abs(d2);
    r.converged = false;
    return r;
  }
  r.err = std::abs(d2 * q / (1.0 - std::abs(q))) + 1e-15 * scale;
  return r;
}

GridFunction v_decompose(const GridFunction& u) {
  const CesaroResult c = cesaro_limit(u);
  if (!c.converged || std::abs(c.value) > 1e-5 * std::max(1.0, u.sup_abs()))
    throw PreconditionError("v_decompose: Cesaro limit of u must vanish (subtract it first)");
  const std::vector<double>& xs = u.nodes();
  std::vector<double> vals(xs.size());
  for (std::size_t i = 0; i < xs.size(); ++i)
    vals[i] = u.values()[i] - u.integral_to(xs[i]) / xs[i];
  // v behaves like the same power near 0 and like -(int u)/x far out
  return GridFunction(xs, std::move(vals), u.left(), RightRule{false, -1.0, 0.0});
}

std::vector<double> integral_over_t(const GridFunction& v) {
  const std::vector<double>& xs = v.nodes();
  const std::vector<double>& vs = v.values();
  std::vector<double> out(xs.size());
  const double beta = v.left().beta;
  if (v.left_limit() != 0.0)
    throw PreconditionError("integral_over_t: v/t not integrable near 0");
  double acc = beta > 0.0 ? vs.front() / beta : 0.0; // int_0^{x1} kappa t^{beta-1}
  out[0] = acc;
  for (std::size_t i = 0; i + 1 < xs.size(); ++i) {
    const double m = v.slope(i);
    acc += (vs[i] - m * xs[i]) * std::log(xs[i + 1] / xs[i]) + m * (xs[i + 1] - xs[i]);
    out[i + 1] = acc;
  }
  return out;
}

GridFunction hardy_operator(const GridFunction& u, double theta) {
  const double beta_eff = u.left_limit() != 0.0 ? 0.0 : u.left().beta;
  const double beta_out = theta + beta_eff;
  if ((u.left_limit() != 0.0 || u.values().front() != 0.0) && beta_out < 0.0)
    throw PreconditionError("hardy_operator: output unbounded at 0 (theta + beta < 0)");
  std::vector<double> xs = u.refined_nodes();
  std::vector<double> vals(xs.size());
  for (std::size_t i = 0; i < xs.size(); ++i)
    vals[i] = std::pow(xs[i], theta - 1.0) * u.integral_to(xs[i]);
  LeftRule left{std::max(beta_out, 0.0), 0.0};
  RightRule right;
  const RightRule& rr = u.right();
  if (rr.compact || rr.rate > 0.0 || rr.power < -1.0) {
    right = RightRule{false, theta - 1.0, 0.0}; // int u saturates
  } else {
    right = RightRule{false, theta + rr.power, 0.0}; // int u ~ x^{1+power}
  }
  return GridFunction(std::move(xs), std::move(vals), left, right);
}

namespace {

QuadResult norm_as_quad(const NormResult& n) {
  QuadResult q;
  q.value = n.infinite ? kInf : n.value;
  q.abs_error_estimate = n.err;
  q.converged = n.converged && !n.infinite;
  return q;
}

double err_total(const QuadResult& q) {
  return q.abs_error_estimate + (std::isfinite(q.tail_bound) ? q.tail_bound : kInf);
}

InequalityReport make_report(std::string name, const QuadResult& lhs,
                             const QuadResult& rhs, double constant) {
  InequalityReport rep;
  rep.name = std::move(name);
  rep.lhs = lhs;
  rep.rhs = rhs;
  rep.constant = constant;
  const double denom = constant * rhs.value;
  if (lhs.value == 0.0) {
    rep.ratio = 0.0;
    rep.budget = 0.0;
    rep.pass = true;
    if (rhs.value == 0.0) rep.vacuous = true;
    return rep;
  }
  if (!std::isfinite(lhs.value) || !std::isfinite(err_total(lhs)) ||
      !std::isfinite(err_total(rhs))) {
    rep.ratio = kInf;
    rep.pass = false;
    rep.note = "unbounded value or error budget";
    return rep;
  }
  rep.ratio = denom > 0.0 ? lhs.value / denom : kInf;
  rep.budget = denom > 0.0
                   ? (err_total(lhs) + rep.ratio * constant * err_total(rhs)) / denom
                   : 0.0;
  rep.pass = rep.ratio <= 1.0 + rep.budget;
  return rep;
}

} // namespace

InequalityReport check_palmieri(const GridFunction& u, const YoungFunction& F,
                                double theta, double ell, double tol) {
  const double pm = F.p_minus();
  const double pc = pm / (pm - 1.0);
  if (!(theta < 1.0 / pc))
    throw PreconditionError("palmieri: out of regime, theta >= 1/(p-)'");
  const double constant = pc / (1.0 - theta * pc);

  if (u.is_zero())
    return make_report("palmieri", QuadResult{}, QuadResult{}, constant);

  NormResult rhs = luxemburg_norm(u, F, WeightSpec::power_mult(theta), tol, ell);
  if (rhs.infinite)
    throw PreconditionError("palmieri: x^theta u not in L^G(I)");

  // lhs = || x^{theta-1} int_0^x u ||: carry the running integral on a grid
  // and put the full x^{theta-1} factor into the weight, so no unbounded
  // values are ever interpolated.
  std::vector<double> xs = u.refined_nodes();
  std::vector<double> Uv(xs.size());
  for (std::size_t i = 0; i < xs.size(); ++i) Uv[i] = u.integral_to(xs[i]);
  const double beta_eff = u.left_limit() != 0.0 ? 0.0 : u.left().beta;
  LeftRule left{beta_eff + 1.0, 0.0};
  RightRule right;
  const RightRule& rr = u.right();
  if (rr.compact || rr.rate > 0.0 || rr.power < -1.0)
    right = RightRule{false, 0.0, 0.0};
  else
    right = RightRule{false, 1.0 + rr.power, 0.0};
  GridFunction U(std::move(xs), std::move(Uv), left, right);
  NormResult lhs = luxemburg_norm(U, F, WeightSpec::power_mult(theta - 1.0), tol, ell);

  InequalityReport rep =
      make_report("palmieri", norm_as_quad(lhs), norm_as_quad(rhs), constant);
  if (lhs.infinite) {
    rep.pass = false;
    rep.note = "lhs norm infinite";
  }
  return rep;
}

InequalityReport check_local_lemma(const GridFunction& u, const YoungFunction& F,
                                   double s, double tol) {
  const HardyConstants k = compute_constants(F, s);
  if (u.is_zero())
    return make_report("local_lemma", QuadResult{}, QuadResult{}, k.c_H);

  QuadResult rhs = modular(u, F, WeightSpec::inverse_power(s), tol);
  if (!std::isfinite(rhs.value) || !std::isfinite(rhs.tail_bound) || rhs.diverged)
    throw PreconditionError("local_lemma: x^{-s} u not in L^G");

  // Tu(x) = int_0^x u(t)/t dt on a refined mesh
  if (u.left_limit() != 0.0)
    throw PreconditionError("local_lemma: u(t)/t not integrable at 0");
  if (!u.right().compact && u.right().rate == 0.0 && u.right().power >= 0.0 &&
      u.values().back() != 0.0)
    throw PreconditionError(
        "local_lemma: u does not decay, the averaged integrand grows "
        "logarithmically and leaves the grid model");
  std::vector<double> fine = u.refined_nodes();
  GridFunction uf(fine, [&] {
    std::vector<double> vv(fine.size());
    for (std::size_t i = 0; i < fine.size(); ++i) vv[i] = u.eval(fine[i]);
    return vv;
  }(), u.left(), u.right());
  std::vector<double> Tv = integral_over_t(uf);
  double gamma_hat = 0.0;
  if (Tv.back() != 0.0)
    gamma_hat = uf.values().back() / Tv.back(); // local log-slope of Tu at xn
  GridFunction T(fine, std::move(Tv), LeftRule{u.left().beta, 0.0},
                 RightRule{false, gamma_hat, 0.0});
  QuadResult lhs = modular(T, F, WeightSpec::inverse_power(s), tol);
  return make_report("local_lemma", lhs, rhs, k.c_H);
}

InequalityReport check_modular_hardy(const GridFunction& u, const YoungFunction& F,
                                     double s, double tol) {
  const HardyConstants k = compute_constants(F, s);
  const CesaroResult ces = cesaro_limit(u);
  if (!ces.converged)
    throw PreconditionError("modular_hardy: no Cesaro limit at 0");
  QuadResult lhs = modular(u, F, WeightSpec::shifted(s, ces.value), tol);
  QuadResult rhs = fractional_modular(u, F, s, tol);
  InequalityReport rep = make_report("modular_hardy", lhs, rhs, k.C_H);
  if (u.is_zero() || (lhs.value == 0.0 && rhs.value == 0.0)) rep.vacuous = true;
  return rep;
}

InequalityReport check_norm_hardy(const GridFunction& u, const YoungFunction& F,
                                  double s, NormHardyVariant variant, double tol,
                                  const NormResult* seminorm_precomputed) {
  const HardyConstants k = compute_constants(F, s);
  const double constant =
      variant == NormHardyVariant::Theorem ? k.norm_const_thm : k.norm_const_cor;
  const char* name =
      variant == NormHardyVariant::Theorem ? "norm_hardy_thm" : "norm_hardy_cor";

  NormResult lhs;
  if (variant == NormHardyVariant::Corollary) {
    const CesaroResult ces = cesaro_limit(u);
    if (!ces.converged)
      throw PreconditionError("norm_hardy: no Cesaro limit at 0");
    lhs = luxemburg_norm(u, F, WeightSpec::shifted(s, ces.value), tol);
  } else {
    try {
      lhs = luxemburg_norm(u, F, WeightSpec::inverse_power(s), tol);
    } catch (const PreconditionError&) {
      lhs.infinite = true; // non-integrable near 0: no finite scale exists
    }
  }
  if (lhs.infinite) {
    InequalityReport rep;
    rep.name = name;
    rep.constant = constant;
    rep.lhs.value = kInf;
    rep.vacuous = true;
    rep.pass = true;
    rep.note = "lhs norm infinite; inequality carries no content for this u";
    return rep;
  }
  NormResult rhs =
      seminorm_precomputed ? *seminorm_precomputed : gagliardo_seminorm(u, F, s, tol);
  InequalityReport rep =
      make_report(name, norm_as_quad(lhs), norm_as_quad(rhs), constant);
  if (rhs.infinite) {
    rep.pass = false;
    rep.note = "rhs seminorm infinite";
  }
  return rep;
}

InequalityReport check_classical_hardy(const GridFunction& u, double p, double tol) {
  if (!(p > 1.0)) throw PreconditionError("classical_hardy: p > 1 required");
  if (u.left_limit() != 0.0)
    throw PreconditionError("classical_hardy: u(0) = 0 representation required");
  const double constant = std::pow(p / (p - 1.0), p);
  if (u.is_zero())
    return make_report("classical_hardy", QuadResult{}, QuadResult{}, constant);

  const YoungFunction Fp = YoungFunction::power(p);
  QuadResult lhs = modular(u, Fp, WeightSpec::power_mult(-1.0), tol);
  lhs.value *= p; // int |u|^p / x^p = p * modular
  lhs.abs_error_estimate *= p;
  lhs.tail_bound *= p;
  if (!std::isfinite(lhs.tail_bound) || lhs.diverged)
    throw PreconditionError("classical_hardy: lhs integral diverges");

  // rhs = int |u'|^p: exact on pieces, closed form on the left rule,
  // quadrature on the right envelope
  QuadResult rhs;
  const double beta = u.left().beta;
  const double x1 = u.x_first();
  if (u.values().front() != 0.0) {
    const double kappa = u.values().front() / std::pow(x1, beta);
    const double expo = (beta - 1.0) * p;
    if (!(expo > -1.0)) {
      rhs.value = kInf; // derivative not p-integrable: rhs infinite
    } else {
      rhs.value += std::pow(std::abs(kappa) * beta, p) * std::pow(x1, expo + 1.0) /
                   (expo + 1.0);
    }
  }
  if (std::isfinite(rhs.value)) {
    for (std::size_t i = 0; i + 1 < u.size(); ++i)
      rhs.value += std::pow(std::abs(u.slope(i)), p) *
                   (u.nodes()[i + 1] - u.nodes()[i]);
    if (!u.right().compact && u.values().back() != 0.0) {
      const RightRule& rr = u.right();
      if (rr.rate == 0.0 && rr.power >= 0.0) {
        rhs.value = kInf;
      } else {
        auto dp = [&](double x) {
          const double A = u.values().back() *
                           std::exp(rr.power * std::log(x / u.x_last()) -
                                    rr.rate * (x - u.x_last()));
          return std::pow(std::abs(A * (rr.power / x - rr.rate)), p);
        };
        double a = u.x_last();
        double add = 0.0;
        for (int c = 0; c < 200; ++c) {
          const double b = a * 2.0;
          const double seg = gauss16_on(dp, a, b);
          add += seg;
          a = b;
          if (seg < 1e-18 * std::max(add, 1.0)) break;
        }
        rhs.value += add;
        rhs.abs_error_estimate += 1e-12 * add;
      }
    }
  }

  if (!std::isfinite(rhs.value)) {
    InequalityReport rep;
    rep.name = "classical_hardy";
    rep.constant = constant;
    rep.lhs = lhs;
    rep.rhs = rhs;
    rep.ratio = 0.0;
    rep.pass = true;
    rep.vacuous = true;
    rep.note = "rhs infinite; inequality holds trivially";
    return rep;
  }
  return make_report("classical_hardy", lhs, rhs, constant);
}

} // namespace orlhardy
