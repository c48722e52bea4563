#include "orlhardy/quad.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include "orlhardy/errors.hpp"
#include "orlhardy/gauss.hpp"

namespace orlhardy {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

double checked_eval(const std::function<double(double)>& f, double x) {
  const double v = f(x);
  if (!std::isfinite(v))
    throw PoisonedInputError("integrand returned a non-finite value", x);
  return v;
}

struct Cell {
  double a, b;
  double val = 0.0, err = 0.0;
  bool dead = false;
};

void eval_cells(const std::function<double(double)>& f, std::vector<Cell>& cells,
                std::size_t first, ExecMode mode) {
  const std::size_t n = cells.size() - first;
  if (n == 0) return;
  const std::size_t chunk = 8;
  const std::size_t nblocks = (n + chunk - 1) / chunk;
  for_each_block(nblocks, mode, [&](std::size_t blk) {
    const std::size_t b0 = first + blk * chunk;
    const std::size_t b1 = std::min(first + n, b0 + chunk);
    for (std::size_t i = b0; i < b1; ++i)
      gauss_pair([&f](double x) { return checked_eval(f, x); }, cells[i].a,
                 cells[i].b, cells[i].val, cells[i].err);
  });
}

} // namespace

double tail_bound_beyond(const std::function<double(double)>& f, double T,
                         const TailRule& rule, bool& ok) {
  ok = true;
  switch (rule.kind) {
    case TailRule::Kind::Zero:
      return 0.0;
    case TailRule::Kind::ExpDecay: {
      const double fT = std::abs(checked_eval(f, T));
      const double mu_eff = rule.rate - std::max(rule.power, 0.0) / T;
      if (!(mu_eff > 0.0)) {
        ok = false;
        return kInf;
      }
      return fT / mu_eff;
    }
    case TailRule::Kind::PowerDecay: {
      const double fT = std::abs(checked_eval(f, T));
      if (fT == 0.0) return 0.0;
      if (!(rule.power < -1.0)) {
        ok = false;
        return kInf;
      }
      return fT * T / (-1.0 - rule.power);
    }
    case TailRule::Kind::Probe: {
      const double f0 = std::abs(checked_eval(f, T));
      const double f2 = std::abs(checked_eval(f, 2.25 * T));
      if (f0 == 0.0 && f2 == 0.0 && std::abs(checked_eval(f, 1.5 * T)) == 0.0)
        return 0.0;
      if (f0 == 0.0 || f2 >= f0) {
        ok = false;
        return kInf;
      }
      const double gamma = std::log(f2 / f0) / std::log(2.25);
      if (!(gamma < -1.05)) {
        ok = false;
        return kInf;
      }
      return 2.0 * f0 * T / (-1.0 - gamma);
    }
  }
  ok = false;
  return kInf;
}

HalflineDecomposition adapt_halfline(const std::function<double(double)>& f,
                                     const HalflineOptions& opt) {
  if (!(opt.truncation > 0.0)) throw PreconditionError("quad: truncation must be > 0");
  if (!(opt.tol > 0.0)) throw PreconditionError("quad: tol must be > 0");

  HalflineDecomposition out;
  const double T = opt.truncation;
  const double xb = std::min(1.0, T);
  std::vector<Cell> cells;

  // Log-spaced cells from xb up to T.
  {
    double a = xb;
    while (a < T) {
      double b = std::min(T, a * 2.0);
      if (b <= a) b = T;
      cells.push_back({a, b});
      a = b;
    }
  }

  // Geometric descent toward 0.  Keep going until the measured-exponent
  // closure of (0, delta] is far below tol; the declared singular exponent
  // sets a deeper floor for strongly singular integrands, and the floor
  // also keeps a zero probe from hiding structure above delta.
  const double closure_target = 0.01 * opt.tol;
  const int min_depth =
      opt.singular_exponent_at_0 < 0.0
          ? std::min(200, static_cast<int>(std::ceil(
                         40.0 / std::max(0.05, 1.0 + opt.singular_exponent_at_0))))
          : 40;
  double delta = xb;
  double closure_val = 0.0, closure_err = 0.0;
  bool closure_done = false;
  for (int level = 1; level <= 400 && !closure_done; ++level) {
    const double lo = 0.5 * delta;
    cells.push_back({lo, delta});
    delta = lo;
    if (level < min_depth || delta <= 1e-290) {
      if (delta <= 1e-290) {
        out.diverged = true;
        out.converged = false;
        closure_done = true;
        closure_val = 0.0;
      }
      continue;
    }
    const double fd = checked_eval(f, delta);
    const double fh = checked_eval(f, 0.5 * delta);
    if (fd == 0.0 && fh == 0.0) {
      closure_val = 0.0;
      closure_err = 0.0;
      closure_done = true;
      break;
    }
    if (fd == 0.0 || fh == 0.0 || (fd > 0.0) != (fh > 0.0)) {
      // no usable power model; treat the plain rectangle as the bound
      closure_val = 0.0;
      closure_err = std::abs(fd) * delta;
      if (closure_err <= closure_target) closure_done = true;
      continue;
    }
    const double sigma = std::log2(fd / fh);
    if (!(sigma > -0.999)) continue; // looks non-integrable; keep digging
    const double c1 = fd * delta / (1.0 + sigma);
    if (std::abs(c1) > closure_target && level < 400) continue;
    // model self-consistency over one more halving
    const double c2 = fh * (0.5 * delta) / (1.0 + sigma);
    double seg, seg_err;
    gauss_pair([&f](double x) { return checked_eval(f, x); }, 0.5 * delta, delta,
               seg, seg_err);
    const double defect = std::abs((c1 - c2) - seg) + seg_err;
    closure_val = c1;
    closure_err = 2.0 * defect + 1e-3 * std::abs(c1);
    closure_done = true;
  }
  if (!closure_done) {
    // ran out of levels with a still-large closure: non-integrable or
    // extremely singular; report what is resolved as a lower bound
    out.diverged = true;
    out.converged = false;
  }

  eval_cells(f, cells, 0, opt.mode);

  // Refinement: split the worst cells until the estimate meets tol.
  double prev_value = kInf;
  int grew = 0;
  for (int round = 0; round < 200; ++round) {
    double total_err = 0.0, total_val = 0.0, max_err = 0.0;
    std::size_t live = 0;
    for (const Cell& c : cells)
      if (!c.dead) {
        total_err += c.err;
        total_val += c.val;
        max_err = std::max(max_err, c.err);
        ++live;
      }
    if (total_err + closure_err <= 0.95 * opt.tol) break;
    if (live >= opt.max_cells) {
      out.converged = false;
      if (std::isfinite(prev_value) && total_val > prev_value * 1.001 && grew >= 3)
        out.diverged = true;
      break;
    }
    if (std::isfinite(prev_value) && total_val > prev_value * 1.001)
      ++grew;
    prev_value = total_val;

    const double threshold = 0.5 * max_err;
    const std::size_t before = cells.size();
    for (std::size_t i = 0; i < before; ++i) {
      if (cells[i].dead || cells[i].err < threshold) continue;
      const Cell c = cells[i]; // copy: push_back below may reallocate
      cells[i].dead = true;
      const double mid =
          (c.a > 0.0 && c.b / c.a >= 4.0) ? std::sqrt(c.a * c.b) : 0.5 * (c.a + c.b);
      cells.push_back({c.a, mid});
      cells.push_back({mid, c.b});
    }
    if (cells.size() == before) break;
    eval_cells(f, cells, before, opt.mode);
  }

  // keep live cells, sorted
  std::vector<std::size_t> order;
  for (std::size_t i = 0; i < cells.size(); ++i)
    if (!cells[i].dead) order.push_back(i);
  std::sort(order.begin(), order.end(),
            [&](std::size_t i, std::size_t j) { return cells[i].a < cells[j].a; });
  out.lo.reserve(order.size());
  for (std::size_t i : order) {
    out.lo.push_back(cells[i].a);
    out.hi.push_back(cells[i].b);
    out.val.push_back(cells[i].val);
    out.err.push_back(cells[i].err);
  }
  out.delta = delta;
  out.closure_value = closure_val;
  out.closure_error = closure_err;
  return out;
}

QuadResult integrate_halfline(const std::function<double(double)>& f,
                              const HalflineOptions& opt) {
  HalflineDecomposition dec = adapt_halfline(f, opt);
  QuadResult r;
  double v = 0.0, e = 0.0;
  for (std::size_t i = 0; i < dec.lo.size(); ++i) {
    v += dec.val[i];
    e += dec.err[i];
  }
  r.value = v + dec.closure_value;
  r.abs_error_estimate = e + dec.closure_error;
  r.cells_used = static_cast<long>(dec.lo.size());
  bool tail_ok = true;
  r.tail_bound = tail_bound_beyond(f, opt.truncation, opt.tail, tail_ok);
  r.converged = dec.converged && tail_ok && r.abs_error_estimate <= opt.tol;
  r.diverged = dec.diverged;
  return r;
}

QuadResult integrate_halfline(const std::function<double(double)>& f,
                              double singular_exponent_at_0, double truncation,
                              double tol) {
  HalflineOptions opt;
  opt.singular_exponent_at_0 = singular_exponent_at_0;
  opt.truncation = truncation;
  opt.tol = tol;
  return integrate_halfline(f, opt);
}

} // namespace orlhardy
