#ifndef ORLHARDY_CORPUS_HPP
#define ORLHARDY_CORPUS_HPP

#include <map>
#include <optional>
#include <string>

#include "orlhardy/grid.hpp"

namespace orlhardy {

enum class CorpusFamily { PowerDecay, Hat, Bump, PowerGrowthCap };

/// A named test function with its grid realization and analytic metadata.
/// Realizations at resolutions r and 2r share nodes exactly (nested
/// exponent grids), and node values are closed-form functions of the node.
struct CorpusEntry {
  std::string id;
  CorpusFamily family = CorpusFamily::PowerDecay;
  double param = 0.0;
  std::size_t resolution = 0;
  GridFunction u;
  std::optional<double> analytic_u0;
  std::map<std::string, double> closed_forms;
};

// powerdecay(beta >= 0):      x^beta e^{-x}, exact envelope tail
// hat(L > 0):                 peak 1 at L/2, compact support (0, L)
// bump(center c; fixed w=c/2): smooth mollifier bump, u == 0 near 0
// powergrowth_cap(M > 0):     min(x, M), constant tail
CorpusEntry make_corpus(CorpusFamily family, double param, std::size_t resolution);
CorpusEntry make_corpus(const std::string& family, double param, std::size_t resolution);

/// Closed-form values for power-type G (available for powerdecay):
/// quantity in {"modular", "weighted_modular", "luxemburg", "lp_norm"}.
std::optional<double> corpus_closed_form(const CorpusEntry& e, const std::string& quantity,
                                         double p, double s = 0.0);

} // namespace orlhardy

#endif
