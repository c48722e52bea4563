#include "orlhardy/corpus.hpp"

#include <algorithm>
#include <cmath>

#include "orlhardy/errors.hpp"

namespace orlhardy {

namespace {

// Nested log grid: x_min * (x_max/x_min)^{k/r}.  Doubling r inserts
// midpoints in the exponent, so coarse nodes reappear bit-identically.
std::vector<double> log_mesh(double x_min, double x_max, std::size_t r) {
  std::vector<double> xs(r + 1);
  const double R = x_max / x_min;
  for (std::size_t k = 0; k <= r; ++k)
    xs[k] = x_min * std::pow(R, static_cast<double>(k) / static_cast<double>(r));
  xs.front() = x_min;
  xs.back() = x_max;
  return xs;
}

std::string family_tag(CorpusFamily f) {
  switch (f) {
    case CorpusFamily::PowerDecay: return "powerdecay";
    case CorpusFamily::Hat: return "hat";
    case CorpusFamily::Bump: return "bump";
    case CorpusFamily::PowerGrowthCap: return "powergrowth_cap";
  }
  return "?";
}

} // namespace

CorpusEntry make_corpus(CorpusFamily family, double param, std::size_t resolution) {
  if (resolution < 32) throw PreconditionError("corpus: resolution >= 32 required");
  const double x_min = 1e-8;

  switch (family) {
    case CorpusFamily::PowerDecay: {
      const double beta = param;
      if (!(beta >= 0.0)) throw PreconditionError("corpus: powerdecay needs beta >= 0");
      std::vector<double> xs = log_mesh(x_min, 40.0, resolution);
      std::vector<double> vs(xs.size());
      for (std::size_t i = 0; i < xs.size(); ++i)
        vs[i] = std::pow(xs[i], beta) * std::exp(-xs[i]);
      CorpusEntry e{family_tag(family) + "(beta=" + std::to_string(param) + ")",
                    family,
                    param,
                    resolution,
                    GridFunction(std::move(xs), std::move(vs), LeftRule{beta},
                                 RightRule{false, beta, 1.0}),
                    beta == 0.0 ? 1.0 : 0.0,
                    {}};
      e.closed_forms["modular(p=2)"] =
          std::tgamma(2.0 * beta + 1.0) / (2.0 * std::pow(2.0, 2.0 * beta + 1.0));
      if (beta > 0.75) {
        const double ex = (beta - 0.75) * 2.0;
        e.closed_forms["weighted_modular(p=2,s=0.75)"] =
            std::tgamma(ex + 1.0) / (2.0 * std::pow(2.0, ex + 1.0));
      }
      if (beta == 1.0)
        e.closed_forms["weighted_modular(p=2,s=0.75)"] =
            std::tgamma(1.5) / (2.0 * std::pow(2.0, 1.5));
      e.closed_forms["luxemburg(p=2)"] =
          std::pow(2.0, -0.5) *
          std::sqrt(std::tgamma(2.0 * beta + 1.0) / std::pow(2.0, 2.0 * beta + 1.0));
      return e;
    }

    case CorpusFamily::Hat: {
      const double L = param;
      if (!(L > 0.0)) throw PreconditionError("corpus: hat needs L > 0");
      const std::size_t half = resolution / 2;
      std::vector<double> left_xs = log_mesh(x_min, 0.5 * L, half);
      std::vector<double> xs(left_xs);
      for (std::size_t k = left_xs.size(); k-- > 0;) {
        const double m = L - left_xs[k];
        if (m > xs.back()) xs.push_back(m);
      }
      if (xs.back() < L) xs.push_back(L);
      std::vector<double> vs(xs.size());
      for (std::size_t i = 0; i < xs.size(); ++i)
        vs[i] = xs[i] <= 0.5 * L ? 2.0 * xs[i] / L : 2.0 * (L - xs[i]) / L;
      vs.back() = 0.0;
      return CorpusEntry{family_tag(family) + "(L=" + std::to_string(param) + ")",
                         family,
                         param,
                         resolution,
                         GridFunction(std::move(xs), std::move(vs), LeftRule{1.0},
                                      RightRule{true, 0.0, 0.0}),
                         0.0,
                         {}};
    }

    case CorpusFamily::Bump: {
      const double c = param > 0.0 ? param : 1.0;
      const double w = 0.5 * c; // support (c/2, 3c/2), away from 0
      std::vector<double> xs = log_mesh(x_min, c + w + 0.5 * c, resolution);
      std::vector<double> vs(xs.size());
      for (std::size_t i = 0; i < xs.size(); ++i) {
        const double z = (xs[i] - c) / w;
        vs[i] = std::abs(z) < 1.0 ? std::exp(1.0 - 1.0 / (1.0 - z * z)) : 0.0;
      }
      vs.back() = 0.0;
      return CorpusEntry{family_tag(family) + "(c=" + std::to_string(c) + ")",
                         family,
                         c,
                         resolution,
                         GridFunction(std::move(xs), std::move(vs), LeftRule{0.0},
                                      RightRule{true, 0.0, 0.0}),
                         0.0,
                         {}};
    }

    case CorpusFamily::PowerGrowthCap: {
      const double M = param;
      if (!(M > 0.0)) throw PreconditionError("corpus: powergrowth_cap needs M > 0");
      const std::size_t nflat = std::max<std::size_t>(8, resolution / 8);
      std::vector<double> xs = log_mesh(x_min, M, resolution);
      for (std::size_t k = 1; k <= nflat; ++k)
        xs.push_back(M + 2.0 * M * static_cast<double>(k) / static_cast<double>(nflat));
      std::vector<double> vs(xs.size());
      for (std::size_t i = 0; i < xs.size(); ++i) vs[i] = std::min(xs[i], M);
      return CorpusEntry{family_tag(family) + "(M=" + std::to_string(param) + ")",
                         family,
                         param,
                         resolution,
                         GridFunction(std::move(xs), std::move(vs), LeftRule{1.0},
                                      RightRule{false, 0.0, 0.0}),
                         0.0,
                         {}};
    }
  }
  throw PreconditionError("corpus: unknown family");
}

CorpusEntry make_corpus(const std::string& family, double param, std::size_t resolution) {
  if (family == "powerdecay") return make_corpus(CorpusFamily::PowerDecay, param, resolution);
  if (family == "hat") return make_corpus(CorpusFamily::Hat, param, resolution);
  if (family == "bump") return make_corpus(CorpusFamily::Bump, param, resolution);
  if (family == "powergrowth_cap")
    return make_corpus(CorpusFamily::PowerGrowthCap, param, resolution);
  throw PreconditionError("corpus: unknown family '" + family + "'");
}

std::optional<double> corpus_closed_form(const CorpusEntry& e, const std::string& quantity,
                                         double p, double s) {
  if (e.family != CorpusFamily::PowerDecay) return std::nullopt;
  const double beta = e.param;
  if (quantity == "modular") {
    // int G(x^beta e^-x) = Gamma(beta p + 1) / (p p^{beta p + 1})
    const double ex = beta * p;
    return std::tgamma(ex + 1.0) / (p * std::pow(p, ex + 1.0));
  }
  if (quantity == "weighted_modular") {
    const double ex = (beta - s) * p;
    if (!(ex > -1.0)) return std::nullopt;
    return std::tgamma(ex + 1.0) / (p * std::pow(p, ex + 1.0));
  }
  if (quantity == "lp_norm") {
    const double ex = beta * p;
    return std::pow(std::tgamma(ex + 1.0) / std::pow(p, ex + 1.0), 1.0 / p);
  }
  if (quantity == "luxemburg") {
    const double ex = beta * p;
    return std::pow(p, -1.0 / p) *
           std::pow(std::tgamma(ex + 1.0) / std::pow(p, ex + 1.0), 1.0 / p);
  }
  return std::nullopt;
}

} // namespace orlhardy
