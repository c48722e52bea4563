// Benchmark comparing the OpenMP kernels against the serial reference on
// the two hot paths: the fractional double integral and the nonlocal
// gradient assembly.  Results must agree bit-for-bit; timing differences
// are the whole point.
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstring>
#include <vector>

#include "orlhardy/corpus.hpp"
#include "orlhardy/eigenproblem.hpp"
#include "orlhardy/fractional.hpp"
#include "orlhardy/parallel.hpp"

using namespace orlhardy;

namespace {

double now_ms() {
  using clock = std::chrono::steady_clock;
  return std::chrono::duration<double, std::milli>(clock::now().time_since_epoch())
      .count();
}

template <class F>
double time_ms(const F& fn, int reps) {
  const double t0 = now_ms();
  for (int r = 0; r < reps; ++r) fn();
  return (now_ms() - t0) / reps;
}

} // namespace

int main(int argc, char** argv) {
  bool quick = false;
  for (int i = 1; i < argc; ++i)
    if (std::strcmp(argv[i], "--quick") == 0) quick = true;

  const std::size_t res = quick ? 400 : 1500;
  const std::size_t n = quick ? 48 : 128;
  const int reps = quick ? 1 : 3;

  const YoungFunction F = YoungFunction::power(2.0);
  const CorpusEntry hat = make_corpus(CorpusFamily::Hat, 2.0, res);

  std::printf("%-34s %12s %12s %9s %s\n", "kernel", "serial[ms]", "openmp[ms]",
              "speedup", "bitwise");

  // fractional double integral
  FractionalOptions fo;
  fo.tol = 1e-6;
  double vs = 0.0, vp = 0.0;
  fo.mode = ExecMode::Serial;
  const double t_ser = time_ms(
      [&] { vs = integrate_fractional_double(hat.u, F, 0.6, fo).value; }, reps);
  fo.mode = ExecMode::Parallel;
  const double t_par = time_ms(
      [&] { vp = integrate_fractional_double(hat.u, F, 0.6, fo).value; }, reps);
  std::printf("%-34s %12.2f %12.2f %8.2fx %s\n", "fractional_modular(hat)", t_ser,
              t_par, t_ser / t_par, vs == vp ? "yes" : "NO");

  // nonlocal gradient assembly
  DiscreteSpace sp{1.0, 2.0, n};
  NonlocalForm form_s(sp, F, 0.75, ExecMode::Serial);
  NonlocalForm form_p(sp, F, 0.75, ExecMode::Parallel);
  std::vector<double> c(n);
  for (std::size_t j = 0; j < n; ++j)
    c[j] = std::sin(M_PI * double(j + 1) / double(n + 1));
  std::vector<double> gs, gp;
  const double g_ser = time_ms([&] { gs = form_s.frac_gradient(c); }, reps * 4);
  const double g_par = time_ms([&] { gp = form_p.frac_gradient(c); }, reps * 4);
  std::printf("%-34s %12.2f %12.2f %8.2fx %s\n", "nonlocal_gradient(n)", g_ser, g_par,
              g_ser / g_par, gs == gp ? "yes" : "NO");

  return (vs == vp && gs == gp) ? 0 : 1;
}
