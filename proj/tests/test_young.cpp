#include <doctest.h>

#include <cmath>
#include <vector>

#include "orlhardy/errors.hpp"
#include "orlhardy/young.hpp"

using namespace orlhardy;

namespace {

// independent reference quadrature: composite Simpson on geometric cells
double simpson_integral(const std::function<double(double)>& f, double a, double b,
                        int per_cell = 64) {
  double total = 0.0;
  double lo = a;
  while (lo < b) {
    double hi = std::min(b, lo * 2.0);
    if (hi <= lo) hi = b;
    const double h = (hi - lo) / per_cell;
    double acc = f(lo) + f(hi);
    for (int i = 1; i < per_cell; ++i) acc += (i % 2 ? 4.0 : 2.0) * f(lo + i * h);
    total += acc * h / 3.0;
    lo = hi;
  }
  return total;
}

} // namespace

TEST_CASE("power kind closed forms") {
  const YoungFunction F = YoungFunction::power(2.0);
  CHECK(F.G(3.0) == doctest::Approx(4.5).epsilon(1e-15));
  CHECK(F.G(0.0) == 0.0);
  CHECK(F.g(2.0) == doctest::Approx(2.0));
  CHECK(YoungFunction::power(3.0).G(2.0) == doctest::Approx(8.0 / 3.0).epsilon(1e-15));
}

TEST_CASE("construction rejects invalid parameters") {
  CHECK_THROWS_AS(YoungFunction::power(1.0), PreconditionError);
  CHECK_THROWS_AS(YoungFunction::power(0.5), PreconditionError);
  CHECK_THROWS_AS(YoungFunction::log_perturbed(-1.0, 2.0, 1.0), PreconditionError);
  CHECK_THROWS_AS(YoungFunction::log_perturbed(1.0, 0.5, 1.0), PreconditionError);
  CHECK_THROWS_AS(YoungFunction::log_perturbed(1.0, 2.0, 0.0), PreconditionError);
}

TEST_CASE("log-perturbed G against reference quadrature") {
  // a=1, b=e, c=1: G(1) = int_0^1 t log(e + t) dt; closed form via parts:
  // 0.5 log(e+1) - 0.5 (0.5 - e + e^2 (log(e+1) - 1))
  const double e = std::exp(1.0);
  const YoungFunction F = YoungFunction::log_perturbed(1.0, e, 1.0);
  const double closed =
      0.5 * std::log(e + 1.0) - 0.5 * (0.5 - e + e * e * (std::log(e + 1.0) - 1.0));
  const double ref = simpson_integral(
      [&](double t) { return t * std::log(e + t); }, 1e-12, 1.0);
  CHECK(closed == doctest::Approx(ref).epsilon(1e-10));
  CHECK(F.G(1.0) == doctest::Approx(closed).epsilon(1e-10));

  // table accuracy across scales
  for (double t : {1e-5, 1e-2, 0.5, 3.0, 1e3, 1e6}) {
    const double ref_t = simpson_integral(
        [&](double x) { return x * std::log(e + x); }, t * 1e-14, t);
    CHECK(F.G(t) == doctest::Approx(ref_t).epsilon(1e-9));
  }
}

TEST_CASE("G(t) matches integral of g at sampled t (all kinds)") {
  const std::vector<YoungFunction> fams = {YoungFunction::power(1.5),
                                           YoungFunction::log_perturbed(1.0, 2.0, 1.0)};
  for (const auto& F : fams) {
    for (double t : {1e-4, 0.1, 1.0, 7.0, 1e2}) {
      const double ref =
          simpson_integral([&](double x) { return F.g(x); }, t * 1e-14, t);
      CHECK(F.G(t) == doctest::Approx(ref).epsilon(1e-9));
    }
  }
}

TEST_CASE("eval_G strictly increasing") {
  for (const auto& F : {YoungFunction::power(2.5),
                        YoungFunction::log_perturbed(0.7, 1.0, 2.0)}) {
    double prev = 0.0;
    for (double t = 1e-6; t < 1e6; t *= 1.7) {
      const double v = F.G(t);
      CHECK(v > prev);
      prev = v;
    }
  }
}

TEST_CASE("conjugate closed forms and Young inequality") {
  const YoungFunction F2 = YoungFunction::power(2.0);
  CHECK(conjugate(F2, 1.0) == doctest::Approx(0.5).epsilon(1e-10));
  CHECK(conjugate(F2, 0.0) == 0.0);
  const YoungFunction F3 = YoungFunction::power(3.0);
  CHECK(conjugate(F3, 1.0) == doctest::Approx(2.0 / 3.0).epsilon(1e-10));
  // conjugate of t^p/p is w^{p'}/p'
  const double pprime = 1.5;
  for (double w : {0.3, 1.7, 12.0})
    CHECK(conjugate(F3, w) ==
          doctest::Approx(std::pow(w, pprime) / pprime).epsilon(1e-10));

  for (const auto& F : {YoungFunction::power(2.0),
                        YoungFunction::log_perturbed(1.0, 2.0, 1.0)}) {
    for (double t : {0.1, 0.9, 2.3, 17.0}) {
      for (double w : {0.2, 1.1, 8.0}) {
        CHECK(t * w <= F.G(t) + conjugate(F, w) + 1e-12);
      }
      // equality at w = g(t)
      const double w = F.g(t);
      CHECK(t * w == doctest::Approx(F.G(t) + conjugate(F, w)).epsilon(1e-8));
    }
  }
}

TEST_CASE("biconjugate recovers G (power closed-form crosscheck)") {
  const double p = 2.5, pc = p / (p - 1.0);
  const YoungFunction F = YoungFunction::power(p);
  const YoungFunction Fc = YoungFunction::custom(
      "conj", [&](double w) { return std::pow(w, pc - 1.0); }, pc, pc,
      [&](double w) { return std::pow(w, pc) / pc; });
  for (double t : {0.2, 1.0, 5.0}) {
    CHECK(conjugate(F, t) == doctest::Approx(std::pow(t, pc) / pc).epsilon(1e-9));
    CHECK(conjugate(Fc, t) == doctest::Approx(F.G(t)).epsilon(1e-6));
  }
}

TEST_CASE("growth certification") {
  const auto grid = default_growth_grid();
  SUBCASE("power: ratio identically p") {
    const auto cert = certify_growth(YoungFunction::power(2.0), grid);
    CHECK(cert.pass);
    CHECK(cert.min_ratio == doctest::Approx(2.0).epsilon(1e-12));
    CHECK(cert.max_ratio == doctest::Approx(2.0).epsilon(1e-12));
  }
  SUBCASE("log-perturbed: ratios within [1+a, 2+a]") {
    const auto cert = certify_growth(YoungFunction::log_perturbed(1.0, 2.0, 1.0), grid);
    CHECK(cert.pass);
    CHECK(cert.min_ratio >= 2.0 - 1e-9);
    CHECK(cert.max_ratio <= 3.0 + 1e-9);
  }
  SUBCASE("wrong declaration fails") {
    // declare p- = 3 on a p = 2 power function
    const YoungFunction F = YoungFunction::custom(
        "mislabeled", [](double t) { return t; }, 3.0, 3.0,
        [](double t) { return 0.5 * t * t; });
    CHECK_FALSE(certify_growth(F, grid).pass);
  }
}

TEST_CASE("envelopes") {
  const YoungFunction F = YoungFunction::power(2.0);
  CHECK(F.psi(4.0) == doctest::Approx(16.0));
  CHECK(F.psi(1.0) == doctest::Approx(1.0));
  CHECK(F.phi(1.0) == doctest::Approx(1.0));
  CHECK(F.phi(68.0) == doctest::Approx(std::sqrt(68.0)).epsilon(1e-12));
  const YoungFunction L = YoungFunction::log_perturbed(1.0, 2.0, 1.0);
  CHECK(L.psi(0.5) == doctest::Approx(std::pow(0.5, 2.0)));
  CHECK(L.psi(2.0) == doctest::Approx(std::pow(2.0, 3.0)));
  CHECK(L.phi(0.5) == doctest::Approx(std::pow(0.5, 1.0 / 3.0)));
  // nondecreasing
  double prev_psi = -1.0, prev_phi = -1.0;
  for (double x = 0.0; x <= 4.0; x += 0.125) {
    CHECK(L.psi(x) >= prev_psi);
    CHECK(L.phi(x) >= prev_phi);
    prev_psi = L.psi(x);
    prev_phi = L.phi(x);
  }
}

TEST_CASE("comparison lemma G1/G2") {
  const YoungFunction F2 = YoungFunction::power(2.0);
  CHECK(check_G1_G2(F2, 2.0, 1.0) == std::pair{true, true});
  CHECK(check_G1_G2(F2, 1.0, 0.37) == std::pair{true, true});
  const double e = std::exp(1.0);
  const YoungFunction L = YoungFunction::log_perturbed(1.0, e, 1.0);
  CHECK(check_G1_G2(L, 3.0, 0.7) == std::pair{true, true});
  for (const auto& F : {YoungFunction::power(1.5), L}) {
    for (double a : {0.0, 0.3, 1.0, 2.7, 40.0})
      for (double t : {0.0, 0.1, 1.0, 9.0}) {
        const auto [g1, g2] = check_G1_G2(F, a, t);
        CHECK(g1);
        CHECK(g2);
      }
  }
}

TEST_CASE("certify_growth error paths") {
  CHECK_THROWS_AS(certify_growth(YoungFunction::power(2.0), {}), PreconditionError);
  CHECK_THROWS_AS(certify_growth(YoungFunction::power(2.0), {0.0}), PreconditionError);
}
