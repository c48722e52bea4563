#include "orlhardy/fractional.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "orlhardy/errors.hpp"
#include "orlhardy/gauss.hpp"

namespace orlhardy {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

struct Cell2D {
  double x0, x1, h0, h1;
  double val = 0.0, err = 0.0;
  bool dead = false;
};

// G(|u(x)-u(x+h)| h^{-s} / lambda) / h integrated over the cell,
// GL16 tensor value and embedded GL8 tensor estimate.
void eval_cell(const GridFunction& u, const YoungFunction& F, double s, double lambda,
               Cell2D& c) {
  const GaussRule& hi = gauss16();
  const GaussRule& lo = gauss8();
  const double cx = 0.5 * (c.x0 + c.x1), rx = 0.5 * (c.x1 - c.x0);
  const double ch = 0.5 * (c.h0 + c.h1), rh = 0.5 * (c.h1 - c.h0);
  double s16 = 0.0;
  for (std::size_t j = 0; j < 16; ++j) {
    const double h = ch + rh * hi.x[j];
    const double hw = hi.w[j] / h;
    const double hs = std::pow(h, -s);
    for (std::size_t i = 0; i < 16; ++i) {
      const double x = cx + rx * hi.x[i];
      const double q = std::abs(u.delta(x, h)) * hs;
      s16 += hi.w[i] * hw * F.G(q / lambda);
    }
  }
  double s8 = 0.0;
  for (std::size_t j = 0; j < 8; ++j) {
    const double h = ch + rh * lo.x[j];
    const double hw = lo.w[j] / h;
    const double hs = std::pow(h, -s);
    for (std::size_t i = 0; i < 8; ++i) {
      const double x = cx + rx * lo.x[i];
      const double q = std::abs(u.delta(x, h)) * hs;
      s8 += lo.w[i] * hw * F.G(q / lambda);
    }
  }
  c.val = s16 * rx * rh;
  c.err = std::abs(s16 - s8) * rx * rh;
  if (!std::isfinite(c.val))
    throw PoisonedInputError("fractional: non-finite cell contribution", c.x0);
}

void eval_cells(const GridFunction& u, const YoungFunction& F, double s, double lambda,
                std::vector<Cell2D>& cells, std::size_t first, ExecMode mode) {
  const std::size_t n = cells.size() - first;
  if (n == 0) return;
  const std::size_t chunk = 4;
  const std::size_t nblocks = (n + chunk - 1) / chunk;
  for_each_block(nblocks, mode, [&](std::size_t blk) {
    const std::size_t b0 = first + blk * chunk;
    const std::size_t b1 = std::min(first + n, b0 + chunk);
    for (std::size_t i = b0; i < b1; ++i) eval_cell(u, F, s, lambda, cells[i]);
  });
}

} // namespace

FractionalCache::FractionalCache(const GridFunction& u, const YoungFunction& F,
                                 double s, FractionalOptions opt)
    : u_(&u), F_(&F), s_(s), opt_(opt) {
  if (!(s > 0.0 && s < 1.0))
    throw PreconditionError("fractional: s must lie in (0,1)");
  if (!(opt_.h_truncation >= 10.0))
    throw PreconditionError("fractional: h truncation must be >= 10");
  const bool flat_tail = u.right().compact ||
                         (u.right().rate == 0.0 && u.right().power == 0.0);
  X_ = flat_tail ? u.extent() : u.extent() + 10.0;
  H_ = opt_.h_truncation;
  h_min_ = 1e-8 * u.min_spacing();
  delta_x_ = u.x_first() * std::pow(4.0, -15.0);
  rebuild(1.0);
}

void FractionalCache::rebuild(double lambda) {
  const GridFunction& u = *u_;
  const YoungFunction& F = *F_;

  // initial columns: graded below x1, coarsened mesh nodes, then out to X
  std::vector<double> xs;
  for (int k = 15; k >= 1; --k) xs.push_back(u.x_first() * std::pow(4.0, -k));
  {
    const std::size_t n = u.size();
    const std::size_t ncols = std::min<std::size_t>(52, n);
    for (std::size_t k = 0; k < ncols; ++k) {
      const std::size_t idx = (k * (n - 1)) / (ncols - 1);
      const double v = u.nodes()[idx];
      if (xs.empty() || v > xs.back()) xs.push_back(v);
    }
  }
  if (X_ > xs.back()) {
    const double a = xs.back();
    for (int k = 1; k <= 3; ++k) xs.push_back(a + (X_ - a) * k / 3.0);
  }

  // initial rows: geometric from h_min to 1, then to H
  std::vector<double> hs;
  hs.push_back(h_min_);
  while (hs.back() < std::min(1.0, H_) * 0.999)
    hs.push_back(std::min(hs.back() * 4.0, std::min(1.0, H_)));
  while (hs.back() < H_ * 0.999) hs.push_back(std::min(hs.back() * 4.0, H_));

  std::vector<Cell2D> cells;
  cells.reserve((xs.size() - 1) * (hs.size() - 1));
  for (std::size_t i = 0; i + 1 < xs.size(); ++i)
    for (std::size_t j = 0; j + 1 < hs.size(); ++j)
      cells.push_back({xs[i], xs[i + 1], hs[j], hs[j + 1]});

  eval_cells(u, F, s_, lambda, cells, 0, opt_.mode);

  built_converged_ = true;
  built_diverged_ = false;
  const double target = 0.475 * opt_.tol; // half-integral target (doubled later)
  double prev_val = kInf;
  int grew = 0;
  for (int round = 0; round < 300; ++round) {
    double total_err = 0.0, total_val = 0.0, max_err = 0.0;
    std::size_t live = 0;
    for (const Cell2D& c : cells)
      if (!c.dead) {
        total_err += c.err;
        total_val += c.val;
        max_err = std::max(max_err, c.err);
        ++live;
      }
    if (total_err <= target) break;
    if (live >= opt_.max_cells) {
      built_converged_ = false;
      if (std::isfinite(prev_val) && total_val > prev_val * 1.001 && grew >= 3)
        built_diverged_ = true;
      break;
    }
    if (std::isfinite(prev_val) && total_val > prev_val * 1.001) ++grew;
    prev_val = total_val;

    const double threshold =
        std::max(0.25 * max_err, 0.35 * total_err / static_cast<double>(live));
    const std::size_t before = cells.size();
    for (std::size_t i = 0; i < before; ++i) {
      if (cells[i].dead || cells[i].err < threshold) continue;
      const Cell2D c = cells[i]; // copy: push_back below may reallocate
      cells[i].dead = true;
      const double lx = std::log(c.x1 / std::max(c.x0, 1e-300));
      const double lh = std::log(c.h1 / c.h0);
      if (lx >= lh) {
        const double mid =
            (c.x0 > 0.0 && c.x1 / c.x0 >= 4.0) ? std::sqrt(c.x0 * c.x1)
                                               : 0.5 * (c.x0 + c.x1);
        cells.push_back({c.x0, mid, c.h0, c.h1});
        cells.push_back({mid, c.x1, c.h0, c.h1});
      } else {
        const double mid =
            (c.h1 / c.h0 >= 4.0) ? std::sqrt(c.h0 * c.h1) : 0.5 * (c.h0 + c.h1);
        cells.push_back({c.x0, c.x1, c.h0, mid});
        cells.push_back({c.x0, c.x1, mid, c.h1});
      }
    }
    if (cells.size() == before) break;
    eval_cells(u, F, s_, lambda, cells, before, opt_.mode);
  }

  // freeze live cells, sorted for a reproducible summation order
  std::vector<std::size_t> order;
  for (std::size_t i = 0; i < cells.size(); ++i)
    if (!cells[i].dead) order.push_back(i);
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    if (cells[a].x0 != cells[b].x0) return cells[a].x0 < cells[b].x0;
    return cells[a].h0 < cells[b].h0;
  });
  ncells_ = order.size();
  q16_.assign(ncells_ * 256, 0.0);
  c16_.assign(ncells_ * 256, 0.0);
  q8_.assign(ncells_ * 64, 0.0);
  c8_.assign(ncells_ * 64, 0.0);
  const GaussRule& hi = gauss16();
  const GaussRule& lo = gauss8();
  const std::size_t chunk = 16;
  const std::size_t nblocks = (ncells_ + chunk - 1) / chunk;
  for_each_block(nblocks, opt_.mode, [&](std::size_t blk) {
    const std::size_t b0 = blk * chunk;
    const std::size_t b1 = std::min(ncells_, b0 + chunk);
    for (std::size_t k = b0; k < b1; ++k) {
      const Cell2D& c = cells[order[k]];
      const double cx = 0.5 * (c.x0 + c.x1), rx = 0.5 * (c.x1 - c.x0);
      const double ch = 0.5 * (c.h0 + c.h1), rh = 0.5 * (c.h1 - c.h0);
      const double jac = rx * rh;
      std::size_t p = k * 256;
      for (std::size_t j = 0; j < 16; ++j) {
        const double h = ch + rh * hi.x[j];
        const double hs = std::pow(h, -s_);
        for (std::size_t i = 0; i < 16; ++i, ++p) {
          const double x = cx + rx * hi.x[i];
          q16_[p] = std::abs(u.delta(x, h)) * hs;
          c16_[p] = jac * hi.w[i] * hi.w[j] / h;
        }
      }
      p = k * 64;
      for (std::size_t j = 0; j < 8; ++j) {
        const double h = ch + rh * lo.x[j];
        const double hs = std::pow(h, -s_);
        for (std::size_t i = 0; i < 8; ++i, ++p) {
          const double x = cx + rx * lo.x[i];
          q8_[p] = std::abs(u.delta(x, h)) * hs;
          c8_[p] = jac * lo.w[i] * lo.w[j] / h;
        }
      }
    }
  });

  build_closures();
  build_tails();
}

void FractionalCache::build_closures() {
  const GridFunction& u = *u_;
  clos_tau_.clear();
  clos_cval_.clear();
  clos_cerr_.clear();
  closb_tau_.clear();
  closb_coef_.clear();
  const double pm = F_->p_minus(), pp = F_->p_plus();
  const double hpow = std::pow(h_min_, 1.0 - s_);
  const double avg = 0.5 * (1.0 / pm + 1.0 / pp);
  const double spread = 0.5 * (1.0 / pm - 1.0 / pp);

  // linear pieces: exact bracket of int_0^{h_min} G(|m| h^{1-s}/l) dh/h
  for (std::size_t i = 0; i + 1 < u.size(); ++i) {
    const double m = std::abs(u.slope(i));
    if (m == 0.0) continue;
    const double len = u.nodes()[i + 1] - u.nodes()[i];
    clos_tau_.push_back(m * hpow);
    clos_cval_.push_back(len / (1.0 - s_) * avg);
    clos_cerr_.push_back(len / (1.0 - s_) * spread);
  }

  // left-rule strip (delta_x, x1): bound with the local slope envelope
  const double x1 = u.x_first();
  const double beta = u.left().beta;
  const double kappa = (u.values().front() - u.left().offset) / std::pow(x1, beta);
  if (beta > 0.0 && kappa != 0.0) {
    const double sig1 = std::abs(kappa) * beta * std::pow(x1, beta - 1.0);
    const double eta = (beta - 1.0) * (beta < 1.0 ? pp : pm);
    const double r = delta_x_ / x1;
    double I;
    if (std::abs(eta + 1.0) < 1e-12)
      I = std::log(1.0 / r);
    else
      I = (1.0 - std::pow(r, eta + 1.0)) / (eta + 1.0);
    if (I < 0.0) I = 0.0;
    closb_tau_.push_back(sig1 * hpow);
    closb_coef_.push_back(x1 * I / ((1.0 - s_) * pm));
  }

  // right-rule strip (xn, X)
  if (!u.right().compact && X_ > u.x_last() && u.values().back() != 0.0) {
    const double sigR = u.max_abs_slope(u.x_last(), X_);
    if (sigR > 0.0) {
      closb_tau_.push_back(sigR * hpow);
      closb_coef_.push_back((X_ - u.x_last()) / ((1.0 - s_) * pm));
    }
  }

  // x -> 0 closure strips at delta_x and delta_x/2
  const GaussRule& hi = gauss16();
  for (int k = 0; k < 2; ++k) {
    xs_q_[k].clear();
    xs_c_[k].clear();
    const double xstar = delta_x_ * (k == 0 ? 1.0 : 0.5);
    double a = h_min_;
    while (a < H_) {
      double b = std::min(H_, a * 2.0);
      if (b <= a) b = H_;
      const double ch = 0.5 * (a + b), rh = 0.5 * (b - a);
      for (std::size_t j = 0; j < 16; ++j) {
        const double h = ch + rh * hi.x[j];
        xs_q_[k].push_back(std::abs(u.delta(xstar, h)) * std::pow(h, -s_));
        xs_c_[k].push_back(rh * hi.w[j] / h);
      }
      a = b;
    }
    // sub-h_min part of the strip integrand
    const double m = u.max_abs_slope(xstar, xstar + h_min_);
    if (m > 0.0) {
      xs_q_[k].push_back(m * hpow);
      xs_c_[k].push_back(1.0 / ((1.0 - s_) * pm));
    }
  }
}

void FractionalCache::build_tails() {
  const GridFunction& u = *u_;
  const double pm = F_->p_minus();
  tail_finite_ = true;
  for (int i = 0; i < 3; ++i) tail_a_[i] = tail_d_[i] = 0.0;

  const double S = u.sup_abs();
  tail_a_[0] = 2.0 * S;
  tail_d_[0] = X_ * std::pow(H_, -s_ * pm) / (s_ * pm);

  const RightRule& rr = u.right();
  const bool flat_tail = rr.compact || (rr.rate == 0.0 && rr.power == 0.0);
  if (flat_tail || u.values().back() == 0.0) return; // nothing varies beyond X

  const double MX = u.sup_abs_from(X_);
  const double sigX = u.max_abs_slope(X_, 2.0 * X_);
  if (!std::isfinite(MX)) {
    tail_finite_ = false;
    return;
  }
  if (rr.rate > 0.0) {
    const double mu_eff = rr.rate - std::max(rr.power, 0.0) / X_;
    if (!(mu_eff > 0.0)) {
      tail_finite_ = false;
      return;
    }
    tail_a_[1] = sigX;
    tail_d_[1] = 1.0 / ((1.0 - s_) * pm * mu_eff * pm);
    tail_a_[2] = 2.0 * MX;
    tail_d_[2] = 1.0 / (s_ * pm * mu_eff * pm);
  } else if (rr.power < 0.0) {
    const double e1 = (rr.power - 1.0) * pm;
    const double e2 = rr.power * pm;
    if (!(e2 < -1.0)) {
      tail_finite_ = false;
      return;
    }
    tail_a_[1] = sigX;
    tail_d_[1] = X_ / ((1.0 - s_) * pm * (-e1 - 1.0));
    tail_a_[2] = 2.0 * MX;
    tail_d_[2] = X_ / (s_ * pm * (-e2 - 1.0));
  } else {
    tail_finite_ = false; // growing tail
  }
}

QuadResult FractionalCache::eval(double lambda) const {
  QuadResult r;
  r.cells_used = static_cast<long>(ncells_);

  const YoungFunction& F = *F_;
  const std::size_t chunk = 64;
  const std::size_t nblocks = ncells_ == 0 ? 0 : (ncells_ + chunk - 1) / chunk;
  std::vector<double> bval(nblocks, 0.0), berr(nblocks, 0.0);
  for_each_block(nblocks, opt_.mode, [&](std::size_t blk) {
    const std::size_t b0 = blk * chunk;
    const std::size_t b1 = std::min(ncells_, b0 + chunk);
    double v = 0.0, e = 0.0;
    for (std::size_t k = b0; k < b1; ++k) {
      double s16 = 0.0;
      const std::size_t p0 = k * 256;
      for (std::size_t p = p0; p < p0 + 256; ++p)
        s16 += c16_[p] * F.G(q16_[p] / lambda);
      double s8 = 0.0;
      const std::size_t r0 = k * 64;
      for (std::size_t p = r0; p < r0 + 64; ++p)
        s8 += c8_[p] * F.G(q8_[p] / lambda);
      v += s16;
      e += std::abs(s16 - s8);
    }
    bval[blk] = v;
    berr[blk] = e;
  });
  double value = 0.0, err = 0.0;
  for (std::size_t b = 0; b < nblocks; ++b) {
    value += bval[b];
    err += berr[b];
  }

  // h -> 0 closure
  for (std::size_t i = 0; i < clos_tau_.size(); ++i) {
    const double Gt = F.G(clos_tau_[i] / lambda);
    value += clos_cval_[i] * Gt;
    err += clos_cerr_[i] * Gt;
  }
  double tail = 0.0;
  for (std::size_t i = 0; i < closb_tau_.size(); ++i)
    tail += closb_coef_[i] * F.G(closb_tau_[i] / lambda);

  // x -> 0 closure from the two strips
  double e0 = 0.0, e1 = 0.0;
  for (std::size_t i = 0; i < xs_q_[0].size(); ++i)
    e0 += xs_c_[0][i] * F.G(xs_q_[0][i] / lambda);
  for (std::size_t i = 0; i < xs_q_[1].size(); ++i)
    e1 += xs_c_[1][i] * F.G(xs_q_[1][i] / lambda);
  bool xclo_ok = true;
  if (e0 > 0.0) {
    if (e1 > e0) {
      const double sig = std::log2(e0 / e1);
      if (sig <= -0.98) {
        xclo_ok = false;
        tail = kInf;
      } else {
        tail += delta_x_ * e0 / (1.0 + sig);
      }
    } else {
      tail += delta_x_ * e0;
    }
  }

  // truncation tails
  bool tails_ok = tail_finite_;
  for (int i = 0; i < 3; ++i)
    if (tail_d_[i] > 0.0 && tail_a_[i] > 0.0) tail += tail_d_[i] * F.G(tail_a_[i] / lambda);
  if (!tail_finite_) tail = kInf;

  r.value = 2.0 * value;
  r.abs_error_estimate = 2.0 * err;
  r.tail_bound = 2.0 * tail;
  r.converged = built_converged_ && tails_ok && xclo_ok &&
                std::isfinite(r.value) && r.abs_error_estimate <= opt_.tol;
  r.diverged = built_diverged_;
  return r;
}

QuadResult integrate_fractional_double(const GridFunction& u, const YoungFunction& F,
                                       double s, const FractionalOptions& opt) {
  if (u.is_zero()) {
    QuadResult r;
    return r;
  }
  FractionalCache cache(u, F, s, opt);
  return cache.eval(1.0);
}

QuadResult integrate_fractional_double(const GridFunction& u, const YoungFunction& F,
                                       double s, double tol) {
  FractionalOptions opt;
  opt.tol = tol;
  return integrate_fractional_double(u, F, s, opt);
}

} // namespace orlhardy
