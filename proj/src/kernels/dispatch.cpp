#include <atomic>
#include <cstdlib>
#include <stdexcept>
#include <string>
#include <vector>

#include "tables.hpp"

namespace mva::kernels {
namespace {

bool cpu_has_avx2() {
#if defined(MVA_HAVE_AVX2)
  return __builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma");
#else
  return false;
#endif
}

std::atomic<const Ops*> g_active{nullptr};
std::atomic<Backend> g_backend{Backend::scalar};

Backend auto_backend() {
  if (const char* env = std::getenv("MVA_KERNEL")) {
    std::string s(env);
    if (!s.empty() && s != "auto") {
      Backend b = backend_from_name(s);
      if (!available(b)) throw std::domain_error("MVA_KERNEL backend unavailable: " + s);
      return b;
    }
  }
#if defined(MVA_HAVE_NEON)
  return Backend::neon;
#else
  return cpu_has_avx2() ? Backend::avx2 : Backend::scalar;
#endif
}

const Ops& ensure_active() {
  const Ops* t = g_active.load(std::memory_order_acquire);
  if (t) return *t;
  select_auto();
  return *g_active.load(std::memory_order_acquire);
}

}  // namespace

bool available(Backend b) {
  switch (b) {
    case Backend::scalar:
      return true;
    case Backend::avx2:
      return cpu_has_avx2();
    case Backend::neon:
#if defined(MVA_HAVE_NEON)
      return true;
#else
      return false;
#endif
  }
  return false;
}

std::vector<Backend> available_backends() {
  std::vector<Backend> out;
  for (Backend b : {Backend::scalar, Backend::avx2, Backend::neon}) {
    if (available(b)) out.push_back(b);
  }
  return out;
}

const Ops& table(Backend b) {
  switch (b) {
    case Backend::scalar:
      return detail::scalar_table();
    case Backend::avx2:
#if defined(MVA_HAVE_AVX2)
      if (cpu_has_avx2()) return detail::avx2_table();
#endif
      break;
    case Backend::neon:
#if defined(MVA_HAVE_NEON)
      return detail::neon_table();
#else
      break;
#endif
  }
  throw std::domain_error("kernel backend unavailable: " + name(b));
}

const Ops& active() { return ensure_active(); }

Backend active_backend() {
  ensure_active();
  return g_backend.load(std::memory_order_acquire);
}

bool select(Backend b) {
  if (!available(b)) return false;
  g_backend.store(b, std::memory_order_release);
  g_active.store(&table(b), std::memory_order_release);
  return true;
}

void select_auto() { select(auto_backend()); }

std::string name(Backend b) {
  switch (b) {
    case Backend::scalar:
      return "scalar";
    case Backend::avx2:
      return "avx2";
    case Backend::neon:
      return "neon";
  }
  return "unknown";
}

Backend backend_from_name(const std::string& s) {
  if (s == "scalar") return Backend::scalar;
  if (s == "avx2") return Backend::avx2;
  if (s == "neon") return Backend::neon;
  throw std::domain_error("unknown kernel backend: " + s);
}

}  // namespace mva::kernels
