#include "orlhardy/modular.hpp"

#include <algorithm>
#include <cmath>
#include <string>
#include <vector>

#include "orlhardy/errors.hpp"
#include "orlhardy/gauss.hpp"

namespace orlhardy {

namespace {
constexpr double kInf = std::numeric_limits<double>::infinity();
}

WeightSpec WeightSpec::inverse_power(double s) {
  if (!(s > 0.0 && s < 1.0))
    throw PreconditionError("weight: inverse power exponent must lie in (0,1)");
  WeightSpec w;
  w.kind = Kind::InversePower;
  w.s = s;
  return w;
}

WeightSpec WeightSpec::shifted(double s, double u0) {
  if (!(s > 0.0 && s < 1.0))
    throw PreconditionError("weight: shifted exponent must lie in (0,1)");
  WeightSpec w;
  w.kind = Kind::Shifted;
  w.s = s;
  w.u0 = u0;
  return w;
}

namespace {

// The weighted integrand G(W(x)/lambda) with W(x) = |v(x)| x^e, where v is
// u or u - u0, together with the half-line options derived from v's rules.
struct WeightedIntegrand {
  GridFunction v;
  double e = 0.0;
  const YoungFunction* F = nullptr;
  HalflineOptions opt;

  double W(double x) const {
    const double a = std::abs(v.eval(x));
    return e == 0.0 ? a : a * std::pow(x, e);
  }
  double f(double x, double lambda) const { return F->G(W(x) / lambda); }
};

WeightedIntegrand make_weighted(const GridFunction& u, const YoungFunction& F,
                                const WeightSpec& w, double tol, double ell) {
  double e = 0.0;
  switch (w.kind) {
    case WeightSpec::Kind::None: e = 0.0; break;
    case WeightSpec::Kind::InversePower: e = -w.s; break;
    case WeightSpec::Kind::Shifted: e = -w.s; break;
    case WeightSpec::Kind::PowerMult: e = w.e; break;
  }
  WeightedIntegrand wi{w.kind == WeightSpec::Kind::Shifted ? u.shifted(w.u0) : u,
                       e, &F, {}};
  const double pm = F.p_minus();

  // integrability near 0 under the model
  const double limit0 = wi.v.left_limit();
  if (limit0 != 0.0 || wi.v.values().front() != 0.0) {
    const double beta_eff = limit0 != 0.0 ? 0.0 : wi.v.left().beta;
    if ((beta_eff + e) * pm <= -1.0)
      throw PreconditionError(
          "modular: integrand not integrable near 0 (beta=" + std::to_string(beta_eff) +
          ", weight exponent=" + std::to_string(e) + ", p-=" + std::to_string(pm) + ")");
    wi.opt.singular_exponent_at_0 = (beta_eff + e) * pm;
  }

  const double reach = wi.v.extent() + 10.0;
  if (ell <= reach) {
    wi.opt.truncation = ell;
    wi.opt.tail = TailRule::zero();
  } else {
    wi.opt.truncation = reach;
    const RightRule& rr = wi.v.right();
    if (rr.compact || wi.v.values().back() == 0.0) {
      wi.opt.tail = TailRule::zero();
    } else if (rr.rate > 0.0) {
      wi.opt.tail = TailRule::exp_decay(rr.rate * pm, (rr.power + e) * pm);
    } else {
      wi.opt.tail = TailRule::power_decay((rr.power + e) * pm);
    }
    // Slow power decay needs a wide window before the analytic bound is
    // negligible; near the critical exponent the integrand carries mass out
    // to astronomically large x, which log-spaced cells absorb at a few
    // cells per decade, so the window can be grown aggressively.
    if (wi.opt.tail.kind == TailRule::Kind::PowerDecay &&
        wi.opt.tail.power < -1.0) {
      double T = wi.opt.truncation;
      while (T < 1e290) {
        const double est = F.G(wi.W(T)) * T / (-1.0 - wi.opt.tail.power);
        if (est <= 0.02 * tol) break;
        T *= 4.0;
      }
      wi.opt.truncation = std::min(T, ell);
    }
  }
  wi.opt.tol = tol;
  return wi;
}

// 1-D analogue of FractionalCache: freeze the weighted quadrature points so
// the bisection in lambda is a single cheap pass per iteration.
class WeightedCache final : public ScalableModular {
 public:
  WeightedCache(const GridFunction& u, const YoungFunction& F, const WeightSpec& w,
                double tol, double ell)
      : wi_(make_weighted(u, F, w, tol, ell)) {
    rebuild(1.0);
  }

  bool input_is_zero() const { return wi_.v.is_zero(); }

  void rebuild(double lambda) override {
    auto f = [this, lambda](double x) { return wi_.f(x, lambda); };
    HalflineDecomposition dec = adapt_halfline(f, wi_.opt);
    built_converged_ = dec.converged;
    built_diverged_ = dec.diverged;
    delta_ = dec.delta;
    const GaussRule& hi = gauss16();
    const GaussRule& lo = gauss8();
    const std::size_t n = dec.lo.size();
    W16_.assign(n * 16, 0.0);
    c16_.assign(n * 16, 0.0);
    W8_.assign(n * 8, 0.0);
    c8_.assign(n * 8, 0.0);
    for (std::size_t k = 0; k < n; ++k) {
      const double c = 0.5 * (dec.lo[k] + dec.hi[k]);
      const double r = 0.5 * (dec.hi[k] - dec.lo[k]);
      for (std::size_t i = 0; i < 16; ++i) {
        W16_[k * 16 + i] = wi_.W(c + r * hi.x[i]);
        c16_[k * 16 + i] = r * hi.w[i];
      }
      for (std::size_t i = 0; i < 8; ++i) {
        W8_[k * 8 + i] = wi_.W(c + r * lo.x[i]);
        c8_[k * 8 + i] = r * lo.w[i];
      }
    }
    ncells_ = n;
    // closure probes and the consistency segment [delta/2, delta]
    Wd_ = wi_.W(delta_);
    Wh_ = wi_.W(0.5 * delta_);
    const double c = 0.75 * delta_, r = 0.25 * delta_;
    for (std::size_t i = 0; i < 16; ++i) {
      seg_W_[i] = wi_.W(c + r * hi.x[i]);
      seg_c_[i] = r * hi.w[i];
    }
    // tail anchors
    const double T = wi_.opt.truncation;
    WT_ = wi_.W(T);
    WT15_ = wi_.W(1.5 * T);
    WT225_ = wi_.W(2.25 * T);
  }

  QuadResult eval(double lambda) const override {
    const YoungFunction& F = *wi_.F;
    QuadResult r;
    r.cells_used = static_cast<long>(ncells_);
    double v = 0.0, e = 0.0;
    for (std::size_t k = 0; k < ncells_; ++k) {
      double s16 = 0.0;
      for (std::size_t i = 0; i < 16; ++i)
        s16 += c16_[k * 16 + i] * F.G(W16_[k * 16 + i] / lambda);
      double s8 = 0.0;
      for (std::size_t i = 0; i < 8; ++i)
        s8 += c8_[k * 8 + i] * F.G(W8_[k * 8 + i] / lambda);
      v += s16;
      e += std::abs(s16 - s8);
    }

    // closure of (0, delta]
    bool clo_ok = true;
    const double fd = F.G(Wd_ / lambda);
    const double fh = F.G(Wh_ / lambda);
    if (fd > 0.0 || fh > 0.0) {
      if (fh <= 0.0 || fd <= 0.0) {
        e += fd * delta_;
      } else {
        const double sigma = std::log2(fd / fh);
        if (sigma <= -0.999) {
          clo_ok = false;
        } else {
          const double c1 = fd * delta_ / (1.0 + sigma);
          const double c2 = fh * 0.5 * delta_ / (1.0 + sigma);
          double seg = 0.0;
          for (std::size_t i = 0; i < 16; ++i)
            seg += seg_c_[i] * F.G(seg_W_[i] / lambda);
          v += c1;
          e += 2.0 * std::abs(c1 - c2 - seg) + 1e-3 * c1;
        }
      }
    }

    // truncation tail
    double tail = 0.0;
    bool tail_ok = true;
    const double T = wi_.opt.truncation;
    switch (wi_.opt.tail.kind) {
      case TailRule::Kind::Zero:
        break;
      case TailRule::Kind::ExpDecay: {
        const double mu_eff =
            wi_.opt.tail.rate - std::max(wi_.opt.tail.power, 0.0) / T;
        if (mu_eff > 0.0)
          tail = F.G(WT_ / lambda) / mu_eff;
        else
          tail_ok = false;
        break;
      }
      case TailRule::Kind::PowerDecay: {
        const double fT = F.G(WT_ / lambda);
        if (fT == 0.0) break;
        if (wi_.opt.tail.power < -1.0)
          tail = fT * T / (-1.0 - wi_.opt.tail.power);
        else
          tail_ok = false;
        break;
      }
      case TailRule::Kind::Probe: {
        const double f0 = F.G(WT_ / lambda);
        const double f1 = F.G(WT15_ / lambda);
        const double f2 = F.G(WT225_ / lambda);
        if (f0 == 0.0 && f1 == 0.0 && f2 == 0.0) break;
        if (f0 == 0.0 || f2 >= f0) {
          tail_ok = false;
          break;
        }
        const double gamma = std::log(f2 / f0) / std::log(2.25);
        if (gamma < -1.05)
          tail = 2.0 * f0 * T / (-1.0 - gamma);
        else
          tail_ok = false;
        break;
      }
    }

    r.value = v;
    r.abs_error_estimate = e;
    r.tail_bound = (tail_ok && clo_ok) ? tail : kInf;
    r.converged = built_converged_ && tail_ok && clo_ok && std::isfinite(r.value) &&
                  e <= wi_.opt.tol;
    r.diverged = built_diverged_;
    return r;
  }

 private:
  WeightedIntegrand wi_;
  std::size_t ncells_ = 0;
  std::vector<double> W16_, c16_, W8_, c8_;
  double delta_ = 0.0, Wd_ = 0.0, Wh_ = 0.0;
  double seg_W_[16] = {}, seg_c_[16] = {};
  double WT_ = 0.0, WT15_ = 0.0, WT225_ = 0.0;
  bool built_converged_ = true, built_diverged_ = false;
};

class FractionalScalable final : public ScalableModular {
 public:
  FractionalScalable(const GridFunction& u, const YoungFunction& F, double s,
                     FractionalOptions opt)
      : cache_(u, F, s, opt) {}
  void rebuild(double lambda) override { cache_.rebuild(lambda); }
  QuadResult eval(double lambda) const override { return cache_.eval(lambda); }

 private:
  FractionalCache cache_;
};

} // namespace

QuadResult modular(const GridFunction& u, const YoungFunction& F, const WeightSpec& w,
                   double tol, double ell) {
  WeightedIntegrand wi = make_weighted(u, F, w, tol, ell);
  if (wi.v.is_zero()) return QuadResult{};
  auto f = [&wi](double x) { return wi.f(x, 1.0); };
  return integrate_halfline(f, wi.opt);
}

NormResult luxemburg_solve(ScalableModular& M, double tol, double target,
                           double p_minus) {
  NormResult out;
  const double exit_tol = 5.0 * tol * std::max(1.0, target);

  auto above = [&](const QuadResult& q) {
    // "Phi still above target", conservatively (non-finite counts as above)
    if (!std::isfinite(q.value)) return true;
    const double upper =
        q.value + q.abs_error_estimate + (std::isfinite(q.tail_bound) ? q.tail_bound : kInf);
    return upper > target;
  };

  for (int stage = 0; stage < 2; ++stage) {
    double lo = std::max(tol, out.value / 4.0);
    double hi = stage == 0 ? 1.0 : out.value;
    QuadResult q = M.eval(hi);
    int guard = 0;
    while (above(q)) {
      hi *= 2.0;
      q = M.eval(hi);
      if (++guard > 200) {
        out.infinite = true;
        out.converged = false;
        out.value = kInf;
        return out;
      }
    }
    if (hi < lo) lo = hi / 2.0;
    QuadResult qlo = M.eval(lo);
    guard = 0;
    while (!above(qlo) && lo > 1e-300) {
      hi = lo;
      lo *= 0.5;
      qlo = M.eval(lo);
      if (++guard > 1000) break;
    }

    double lambda = hi;
    QuadResult qmid = M.eval(lambda);
    for (int it = 0; it < 200; ++it) {
      lambda = 0.5 * (lo + hi);
      qmid = M.eval(lambda);
      const double val = std::isfinite(qmid.value) ? qmid.value : kInf;
      if (std::isfinite(val) && std::abs(val - target) <= exit_tol) break;
      (val > target ? lo : hi) = lambda;
      if (hi - lo <= 1e-14 * hi) break;
    }
    out.value = lambda;
    out.modular_at_norm = qmid;
    if (stage == 0) M.rebuild(lambda);
  }

  const QuadResult& q = out.modular_at_norm;
  const double resid = std::abs(q.value - target) + q.abs_error_estimate +
                       (std::isfinite(q.tail_bound) ? q.tail_bound : 0.0);
  out.err = out.value * resid / (p_minus * target);
  out.converged = std::isfinite(q.value) &&
                  std::abs(q.value - target) <= 2.0 * exit_tol &&
                  std::isfinite(q.tail_bound);
  return out;
}

NormResult luxemburg_norm(const GridFunction& u, const YoungFunction& F,
                          const WeightSpec& w, double tol, double ell) {
  WeightedCache M(u, F, w, tol, ell);
  if (M.input_is_zero()) return NormResult{};
  return luxemburg_solve(M, tol, 1.0, F.p_minus());
}

NormResult scaled_norm(const GridFunction& u, const YoungFunction& F, double eps,
                       double tol) {
  if (!(eps > 0.0)) throw PreconditionError("scaled_norm: eps must be > 0");
  WeightedCache M(u, F, WeightSpec::none(), tol, kNoDomainLimit);
  if (M.input_is_zero()) return NormResult{};
  return luxemburg_solve(M, tol, 1.0 / eps, F.p_minus());
}

QuadResult fractional_modular(const GridFunction& u, const YoungFunction& F, double s,
                              double tol) {
  return integrate_fractional_double(u, F, s, tol);
}

NormResult gagliardo_seminorm(const GridFunction& u, const YoungFunction& F, double s,
                              double tol, const FractionalOptions* opt) {
  if (u.is_zero()) return NormResult{};
  FractionalOptions o = opt ? *opt : FractionalOptions{};
  o.tol = tol;
  FractionalScalable M(u, F, s, o);
  return luxemburg_solve(M, tol, 1.0, F.p_minus());
}

} // namespace orlhardy
