#ifndef ORLHARDY_PARALLEL_HPP
#define ORLHARDY_PARALLEL_HPP

#include <cstddef>
#include <exception>
#include <functional>
#include <stdexcept>
#include <vector>

namespace orlhardy {

// Execution mode for the data-parallel kernels (quadrature cell sweeps,
// nonlocal assembly).  Serial runs the exact same per-block code without
// OpenMP and is kept as the reference implementation: results must be
// bit-identical in both modes because every reduction happens serially
// in a fixed order over per-block outputs.
enum class ExecMode { Serial, Parallel };

ExecMode default_exec_mode();
void set_default_exec_mode(ExecMode mode);

namespace detail {
void run_blocks_serial(std::size_t nblocks, const std::function<void(std::size_t)>& body);
void run_blocks_parallel(std::size_t nblocks, const std::function<void(std::size_t)>& body);
} // namespace detail

// Runs body(0..nblocks-1), each block exactly once.  Blocks must not touch
// shared mutable state except their own output slot.  Exceptions are
// collected and the one from the lowest block index is rethrown, so the
// error path is deterministic too.
template <class F>
void for_each_block(std::size_t nblocks, ExecMode mode, F&& body) {
  std::vector<std::exception_ptr> errors(nblocks);
  auto guarded = [&](std::size_t b) {
    try {
      body(b);
    } catch (...) {
      errors[b] = std::current_exception();
    }
  };
  if (mode == ExecMode::Parallel)
    detail::run_blocks_parallel(nblocks, guarded);
  else
    detail::run_blocks_serial(nblocks, guarded);
  for (std::size_t b = 0; b < nblocks; ++b)
    if (errors[b]) std::rethrow_exception(errors[b]);
}

} // namespace orlhardy

#endif
