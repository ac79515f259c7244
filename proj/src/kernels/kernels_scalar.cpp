#include <algorithm>
#include <cmath>
#include <cstddef>

#include "tables.hpp"

namespace mva::kernels::detail {
namespace {

void vexp_scalar(const double* x, double* y, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) {
    y[i] = std::exp(std::clamp(x[i], kVexpLo, kVexpHi));
  }
}

void vnmul_scalar(const double* a, const double* b, double* out, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) out[i] = -(a[i] * b[i]);
}

double dot_scalar(const double* a, const double* b, std::size_t n) {
  double acc = 0.0;
  for (std::size_t i = 0; i < n; ++i) acc += a[i] * b[i];
  return acc;
}

double sum_scalar(const double* x, std::size_t n) {
  double acc = 0.0;
  for (std::size_t i = 0; i < n; ++i) acc += x[i];
  return acc;
}

double max_abs_scalar(const double* x, std::size_t n) {
  double m = 0.0;
  for (std::size_t i = 0; i < n; ++i) m = std::max(m, std::fabs(x[i]));
  return m;
}

}  // namespace

const Ops& scalar_table() {
  static const Ops ops{vexp_scalar, vnmul_scalar, dot_scalar, sum_scalar,
                       max_abs_scalar};
  return ops;
}

}  // namespace mva::kernels::detail
