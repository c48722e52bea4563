#include "orlhardy/grid.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "orlhardy/errors.hpp"
#include "orlhardy/gauss.hpp"

namespace orlhardy {

GridFunction::GridFunction(std::vector<double> nodes, std::vector<double> values,
                           LeftRule left, RightRule right)
    : nodes_(std::move(nodes)), values_(std::move(values)), left_(left), right_(right) {
  if (nodes_.size() < 2 || nodes_.size() != values_.size())
    throw PreconditionError("grid: need >= 2 nodes and matching values");
  if (!(nodes_.front() > 0.0))
    throw PreconditionError("grid: nodes must be positive");
  min_spacing_ = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i + 1 < nodes_.size(); ++i) {
    const double d = nodes_[i + 1] - nodes_[i];
    if (!(d > 0.0)) throw PreconditionError("grid: nodes must be strictly increasing");
    min_spacing_ = std::min(min_spacing_, d);
  }
  for (double v : values_)
    if (!std::isfinite(v)) throw PreconditionError("grid: values must be finite");
  if (right_.compact && values_.back() != 0.0)
    throw PreconditionError("grid: compact support requires u(xn) = 0");
  if (!(right_.rate >= 0.0))
    throw PreconditionError("grid: right rule rate must be >= 0");
  if (!(left_.beta >= 0.0))
    throw PreconditionError("grid: left rule exponent must be >= 0");

  prefix_.resize(nodes_.size());
  prefix_[0] = left_.offset * nodes_[0] +
               (values_[0] - left_.offset) * nodes_[0] / (left_.beta + 1.0);
  for (std::size_t i = 1; i < nodes_.size(); ++i)
    prefix_[i] = prefix_[i - 1] +
                 0.5 * (values_[i] + values_[i - 1]) * (nodes_[i] - nodes_[i - 1]);

  suffix_max_.resize(nodes_.size());
  double m = 0.0;
  for (std::size_t i = nodes_.size(); i-- > 0;) {
    m = std::max(m, std::abs(values_[i]));
    suffix_max_[i] = m;
  }
  sup_abs_ = std::max(m, std::abs(left_limit()));
}

double GridFunction::left_kappa() const {
  return (values_.front() - left_.offset) / std::pow(nodes_.front(), left_.beta);
}

double GridFunction::right_value(double x) const {
  if (right_.compact) return 0.0;
  const double xn = nodes_.back();
  return values_.back() *
         std::exp(right_.power * std::log(x / xn) - right_.rate * (x - xn));
}

long GridFunction::locate(double x) const {
  if (x < nodes_.front()) return -1;
  if (x >= nodes_.back()) return static_cast<long>(nodes_.size()) - 1;
  const auto it = std::upper_bound(nodes_.begin(), nodes_.end(), x);
  return static_cast<long>(it - nodes_.begin()) - 1;
}

double GridFunction::slope(std::size_t piece) const {
  return (values_[piece + 1] - values_[piece]) / (nodes_[piece + 1] - nodes_[piece]);
}

double GridFunction::eval(double x) const {
  if (x < 0.0) throw PreconditionError("grid: eval requires x >= 0");
  if (x == 0.0) return left_limit();
  const long r = locate(x);
  if (r < 0) {
    if (left_.beta == 0.0) return values_.front();
    return left_.offset +
           (values_.front() - left_.offset) * std::pow(x / nodes_.front(), left_.beta);
  }
  const auto i = static_cast<std::size_t>(r);
  if (i + 1 >= nodes_.size()) {
    if (x == nodes_.back()) return values_.back();
    return right_value(x);
  }
  const double t = (x - nodes_[i]) / (nodes_[i + 1] - nodes_[i]);
  return values_[i] + t * (values_[i + 1] - values_[i]);
}

double GridFunction::region_delta(long r, double pos, double d) const {
  if (d <= 0.0) return 0.0;
  if (r < 0) {
    if (left_.beta == 0.0) return 0.0;
    const double upow = (values_.front() - left_.offset) *
                        std::pow(pos / nodes_.front(), left_.beta);
    return upow * std::expm1(left_.beta * std::log1p(d / pos));
  }
  const auto i = static_cast<std::size_t>(r);
  if (i + 1 >= nodes_.size()) {
    if (right_.compact) return 0.0;
    const double u = right_value(pos);
    return u * std::expm1(right_.power * std::log1p(d / pos) - right_.rate * d);
  }
  return slope(i) * d;
}

double GridFunction::delta(double x, double h) const {
  if (!(h >= 0.0)) throw PreconditionError("grid: delta requires h >= 0");
  if (h == 0.0) return 0.0;
  const long r = locate(x);
  // same-region fast paths
  const double boundary =
      (r < 0) ? nodes_.front()
              : (static_cast<std::size_t>(r) + 1 >= nodes_.size()
                     ? std::numeric_limits<double>::infinity()
                     : nodes_[static_cast<std::size_t>(r) + 1]);
  if (h <= boundary - x) return region_delta(r, x, h);

  // local spacing scale; beyond ~32 spacings a plain difference of
  // evaluations is accurate enough
  double spacing;
  if (r < 0)
    spacing = nodes_.front();
  else if (static_cast<std::size_t>(r) + 1 >= nodes_.size())
    spacing = std::max(x, nodes_.back());
  else
    spacing = nodes_[static_cast<std::size_t>(r) + 1] - nodes_[static_cast<std::size_t>(r)];
  if (h > 32.0 * spacing) return eval(x + h) - eval(x);

  double acc = 0.0, pos = x, rem = h;
  long cur = r;
  while (rem > 0.0) {
    const double b =
        (cur < 0) ? nodes_.front()
                  : (static_cast<std::size_t>(cur) + 1 >= nodes_.size()
                         ? std::numeric_limits<double>::infinity()
                         : nodes_[static_cast<std::size_t>(cur) + 1]);
    const double room = b - pos;
    if (rem <= room || !std::isfinite(b)) {
      acc += region_delta(cur, pos, rem);
      break;
    }
    acc += region_delta(cur, pos, room > 0.0 ? room : 0.0);
    pos = b;
    rem -= room > 0.0 ? room : 0.0;
    ++cur;
    if (cur >= static_cast<long>(nodes_.size())) break;
  }
  return acc;
}

double GridFunction::integral_to(double x) const {
  if (x <= 0.0) return 0.0;
  const long r = locate(x);
  if (r < 0) {
    if (left_.beta == 0.0) return values_.front() * x;
    const double upow =
        (values_.front() - left_.offset) * std::pow(x / nodes_.front(), left_.beta);
    return left_.offset * x + upow * x / (left_.beta + 1.0);
  }
  const auto i = static_cast<std::size_t>(r);
  if (i + 1 >= nodes_.size()) {
    double total = prefix_.back();
    if (x > nodes_.back() && !right_.compact) {
      // envelope integral by composite GL16 on geometric cells
      double a = nodes_.back();
      while (a < x) {
        double b = std::min(x, a * 2.0);
        if (b <= a) b = x;
        total += gauss16_on([this](double t) { return right_value(t); }, a, b);
        a = b;
      }
    }
    return total;
  }
  const double d = x - nodes_[i];
  return prefix_[i] + values_[i] * d + 0.5 * slope(i) * d * d;
}

bool GridFunction::is_zero() const {
  for (double v : values_)
    if (v != 0.0) return false;
  return true;
}

double GridFunction::sup_abs_from(double x) const {
  double tail_sup;
  if (right_.compact) {
    tail_sup = 0.0;
  } else if (right_.rate > 0.0) {
    // envelope max beyond xn at t* = power/rate (if beyond the anchor)
    const double xn = nodes_.back();
    const double from = std::max(x, xn);
    double peak = std::abs(right_value(from));
    if (right_.power > 0.0) {
      const double tstar = right_.power / right_.rate;
      if (tstar > from) peak = std::max(peak, std::abs(right_value(tstar)));
    }
    tail_sup = peak;
  } else if (right_.power > 0.0) {
    return std::numeric_limits<double>::infinity();
  } else {
    tail_sup = std::abs(right_value(std::max(x, nodes_.back())));
  }
  if (x >= nodes_.back()) return tail_sup;
  const long r = locate(x);
  const std::size_t i = r < 0 ? 0 : static_cast<std::size_t>(r);
  return std::max({std::abs(eval(std::max(x, 0.0))), suffix_max_[i], tail_sup});
}

double GridFunction::max_abs_slope(double a, double b) const {
  double m = 0.0;
  const double x1 = nodes_.front(), xn = nodes_.back();
  if (a < x1 && left_.beta > 0.0) {
    const double k = std::abs(left_kappa()) * left_.beta;  // offset drops out
    const double lo = std::max(a, x1 * 1e-12);
    const double hi = std::min(b, x1);
    if (lo < hi)
      m = std::max(m, left_.beta >= 1.0 ? k * std::pow(hi, left_.beta - 1.0)
                                        : k * std::pow(lo, left_.beta - 1.0));
  }
  if (b > x1 && a < xn) {
    long i0 = locate(std::max(a, x1));
    if (i0 < 0) i0 = 0;
    long i1 = locate(std::min(b, xn));
    if (i1 >= static_cast<long>(nodes_.size()) - 1) i1 = static_cast<long>(nodes_.size()) - 2;
    for (long i = i0; i <= i1; ++i)
      m = std::max(m, std::abs(slope(static_cast<std::size_t>(i))));
  }
  if (b > xn && !right_.compact) {
    auto env_slope = [this](double x) {
      return std::abs(right_value(x)) *
             std::abs(right_.power / x - right_.rate);
    };
    m = std::max({m, env_slope(std::max(a, xn)), env_slope(std::max(b, xn))});
  }
  return m;
}

GridFunction GridFunction::shifted(double c) const {
  std::vector<double> vals(values_);
  LeftRule nl = left_;
  RightRule nr = right_;
  double shift = c;
  const double snap = 1e-6 * std::max(1.0, sup_abs_);
  if (left_.beta == 0.0) {
    // constant rule: snap so the difference vanishes identically at 0
    if (std::abs(values_.front() - c) <= snap) shift = values_.front();
  } else {
    nl.offset = left_.offset - shift;
    if (std::abs(nl.offset) <= snap) {
      shift = left_.offset;
      nl.offset = 0.0;
    }
  }
  for (double& v : vals) v -= shift;
  const bool decays_to_zero =
      right_.compact || right_.rate > 0.0 || (right_.rate == 0.0 && right_.power < 0.0);
  if (shift != 0.0 &&
      (decays_to_zero || (right_.power == 0.0 && right_.rate == 0.0))) {
    nr.compact = false;
    nr.power = 0.0;
    nr.rate = 0.0; // constant tail at u(inf) - shift
  }
  if (nr.compact && vals.back() != 0.0) {
    nr.compact = false;
    nr.power = 0.0;
    nr.rate = 0.0;
  }
  return GridFunction(nodes_, std::move(vals), nl, nr);
}

std::vector<double> GridFunction::refined_nodes() const {
  std::vector<double> out;
  out.reserve(nodes_.size() * 2 - 1);
  for (std::size_t i = 0; i < nodes_.size(); ++i) {
    out.push_back(nodes_[i]);
    if (i + 1 < nodes_.size()) out.push_back(0.5 * (nodes_[i] + nodes_[i + 1]));
  }
  return out;
}

} // namespace orlhardy
