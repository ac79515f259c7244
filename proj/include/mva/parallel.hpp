#pragma once

#include <cstddef>
#include <exception>
#include <thread>
#include <utility>
#include <vector>

namespace mva {

// Deterministic fork-join helper. Work is split into contiguous index
// blocks, one per worker, so every index is processed exactly once and the
// assignment of index to data is independent of the worker count. Callers
// must write results into per-index slots; reductions are done serially by
// the caller afterwards so results are bit-identical for any thread count.

unsigned max_threads();
void set_max_threads(unsigned n);  // 0 restores the hardware default

template <typename F>
void parallel_for(std::size_t n, F&& body) {
  if (n == 0) return;
  std::size_t workers = max_threads();
  if (workers > n) workers = n;
  if (workers <= 1) {
    for (std::size_t i = 0; i < n; ++i) body(i);
    return;
  }

  const std::size_t chunk = (n + workers - 1) / workers;
  std::vector<std::thread> pool;
  pool.reserve(workers - 1);
  std::exception_ptr error;

  auto run_block = [&body](std::size_t lo, std::size_t hi,
                           std::exception_ptr* err) noexcept {
    try {
      for (std::size_t i = lo; i < hi; ++i) body(i);
    } catch (...) {
      *err = std::current_exception();
    }
  };

  std::vector<std::exception_ptr> errors(workers);
  for (std::size_t w = 1; w < workers; ++w) {
    const std::size_t lo = w * chunk;
    const std::size_t hi = lo + chunk < n ? lo + chunk : n;
    if (lo >= hi) break;
    pool.emplace_back(run_block, lo, hi, &errors[w]);
  }
  run_block(0, chunk < n ? chunk : n, &errors[0]);
  for (auto& t : pool) t.join();
  for (auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }
}

}  // namespace mva
