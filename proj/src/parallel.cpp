#include "orlhardy/parallel.hpp"

#include <atomic>
#include <cstdlib>
#include <cstring>

namespace orlhardy {

namespace {
std::atomic<int> g_mode{-1}; // -1 = not yet decided

ExecMode initial_mode() {
  const char* env = std::getenv("ORLHARDY_SERIAL");
  if (env && std::strcmp(env, "0") != 0) return ExecMode::Serial;
  return ExecMode::Parallel;
}
} // namespace

ExecMode default_exec_mode() {
  int m = g_mode.load(std::memory_order_relaxed);
  if (m < 0) {
    m = initial_mode() == ExecMode::Serial ? 0 : 1;
    g_mode.store(m, std::memory_order_relaxed);
  }
  return m == 0 ? ExecMode::Serial : ExecMode::Parallel;
}

void set_default_exec_mode(ExecMode mode) {
  g_mode.store(mode == ExecMode::Serial ? 0 : 1, std::memory_order_relaxed);
}

namespace detail {

void run_blocks_serial(std::size_t nblocks, const std::function<void(std::size_t)>& body) {
  for (std::size_t b = 0; b < nblocks; ++b) body(b);
}

void run_blocks_parallel(std::size_t nblocks, const std::function<void(std::size_t)>& body) {
#ifdef _OPENMP
#pragma omp parallel for schedule(dynamic, 1)
  for (long long b = 0; b < static_cast<long long>(nblocks); ++b)
    body(static_cast<std::size_t>(b));
#else
  run_blocks_serial(nblocks, body);
#endif
}

} // namespace detail
} // namespace orlhardy
