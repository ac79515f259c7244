// NEON (aarch64) variants, mirroring the AVX2 implementations two lanes at
// a time. NEON is mandatory on aarch64, so there is no runtime probe.

#include <arm_neon.h>

#include <cmath>
#include <cstddef>
#include <cstring>

#include "tables.hpp"

namespace mva::kernels::detail {
namespace {

// Same range reduction and rational approximation as the AVX2 exp4; see
// kernels_avx2.cpp. Inputs must be pre-clamped to [kVexpLo, kVexpHi].
inline float64x2_t exp2l(float64x2_t x) {
  const float64x2_t kLog2e = vdupq_n_f64(1.4426950408889634073599);
  const float64x2_t kC1 = vdupq_n_f64(6.93145751953125e-1);
  const float64x2_t kC2 = vdupq_n_f64(1.42860682030941723212e-6);

  float64x2_t n = vrndmq_f64(vfmaq_f64(vdupq_n_f64(0.5), x, kLog2e));
  x = vfmsq_f64(x, n, kC1);
  x = vfmsq_f64(x, n, kC2);

  float64x2_t xx = vmulq_f64(x, x);
  float64x2_t p = vdupq_n_f64(1.26177193074810590878e-4);
  p = vfmaq_f64(vdupq_n_f64(3.02994407707441961300e-2), p, xx);
  p = vfmaq_f64(vdupq_n_f64(9.99999999999999999910e-1), p, xx);
  p = vmulq_f64(p, x);
  float64x2_t q = vdupq_n_f64(3.00198505138664455042e-6);
  q = vfmaq_f64(vdupq_n_f64(2.52448340349684104192e-3), q, xx);
  q = vfmaq_f64(vdupq_n_f64(2.27265548208155028766e-1), q, xx);
  q = vfmaq_f64(vdupq_n_f64(2.0), q, xx);
  float64x2_t r = vdivq_f64(p, vsubq_f64(q, p));
  r = vfmaq_f64(vdupq_n_f64(1.0), vdupq_n_f64(2.0), r);

  int64x2_t n64 = vcvtq_s64_f64(n);
  n64 = vshlq_n_s64(vaddq_s64(n64, vdupq_n_s64(1023)), 52);
  return vmulq_f64(r, vreinterpretq_f64_s64(n64));
}

void vexp_neon(const double* x, double* y, std::size_t n) {
  const float64x2_t lo = vdupq_n_f64(kVexpLo);
  const float64x2_t hi = vdupq_n_f64(kVexpHi);
  std::size_t i = 0;
  for (; i + 2 <= n; i += 2) {
    float64x2_t v = vld1q_f64(x + i);
    v = vminq_f64(vmaxq_f64(v, lo), hi);
    vst1q_f64(y + i, exp2l(v));
  }
  if (i < n) {
    double tin[2] = {0.0, 0.0};
    double tout[2];
    std::memcpy(tin, x + i, sizeof(double));
    float64x2_t v = vld1q_f64(tin);
    v = vminq_f64(vmaxq_f64(v, lo), hi);
    vst1q_f64(tout, exp2l(v));
    y[i] = tout[0];
  }
}

void vnmul_neon(const double* a, const double* b, double* out, std::size_t n) {
  std::size_t i = 0;
  for (; i + 2 <= n; i += 2) {
    vst1q_f64(out + i, vnegq_f64(vmulq_f64(vld1q_f64(a + i), vld1q_f64(b + i))));
  }
  for (; i < n; ++i) out[i] = -(a[i] * b[i]);
}

double dot_neon(const double* a, const double* b, std::size_t n) {
  float64x2_t acc0 = vdupq_n_f64(0.0);
  float64x2_t acc1 = vdupq_n_f64(0.0);
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    acc0 = vfmaq_f64(acc0, vld1q_f64(a + i), vld1q_f64(b + i));
    acc1 = vfmaq_f64(acc1, vld1q_f64(a + i + 2), vld1q_f64(b + i + 2));
  }
  for (; i + 2 <= n; i += 2) {
    acc0 = vfmaq_f64(acc0, vld1q_f64(a + i), vld1q_f64(b + i));
  }
  double s = vaddvq_f64(vaddq_f64(acc0, acc1));
  for (; i < n; ++i) s += a[i] * b[i];
  return s;
}

double sum_neon(const double* x, std::size_t n) {
  float64x2_t acc0 = vdupq_n_f64(0.0);
  float64x2_t acc1 = vdupq_n_f64(0.0);
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    acc0 = vaddq_f64(acc0, vld1q_f64(x + i));
    acc1 = vaddq_f64(acc1, vld1q_f64(x + i + 2));
  }
  for (; i + 2 <= n; i += 2) acc0 = vaddq_f64(acc0, vld1q_f64(x + i));
  double s = vaddvq_f64(vaddq_f64(acc0, acc1));
  for (; i < n; ++i) s += x[i];
  return s;
}

double max_abs_neon(const double* x, std::size_t n) {
  float64x2_t m = vdupq_n_f64(0.0);
  std::size_t i = 0;
  for (; i + 2 <= n; i += 2) m = vmaxq_f64(m, vabsq_f64(vld1q_f64(x + i)));
  double best = vmaxvq_f64(m);
  for (; i < n; ++i) {
    double v = std::fabs(x[i]);
    best = best < v ? v : best;
  }
  return best;
}

}  // namespace

const Ops& neon_table() {
  static const Ops ops{vexp_neon, vnmul_neon, dot_neon, sum_neon, max_abs_neon};
  return ops;
}

}  // namespace mva::kernels::detail
