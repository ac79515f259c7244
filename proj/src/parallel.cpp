#include "mva/parallel.hpp"

#include <atomic>

namespace mva {
namespace {

std::atomic<unsigned> g_max_threads{0};

}  // namespace

unsigned max_threads() {
  unsigned n = g_max_threads.load(std::memory_order_relaxed);
  if (n != 0) return n;
  unsigned hw = std::thread::hardware_concurrency();
  return hw == 0 ? 1u : hw;
}

void set_max_threads(unsigned n) {
  g_max_threads.store(n, std::memory_order_relaxed);
}

}  // namespace mva
