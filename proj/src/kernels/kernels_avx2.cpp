// AVX2+FMA variants. This translation unit is compiled with -mavx2 -mfma;
// nothing here may run unless the dispatcher has verified CPU support.

#include <immintrin.h>

#include <cmath>
#include <cstddef>
#include <cstring>

#include "tables.hpp"

namespace mva::kernels::detail {
namespace {

// exp on 4 lanes: Cody-Waite range reduction against ln 2, degree-2/3
// rational approximation of expm1 on the reduced interval, exponent
// reassembly through the IEEE-754 bit layout. Inputs must already be
// clamped to [kVexpLo, kVexpHi] so the reassembled exponent stays normal.
// Each lane depends only on its own input.
inline __m256d exp4(__m256d x) {
  const __m256d kLog2e = _mm256_set1_pd(1.4426950408889634073599);
  const __m256d kC1 = _mm256_set1_pd(6.93145751953125e-1);
  const __m256d kC2 = _mm256_set1_pd(1.42860682030941723212e-6);

  __m256d n = _mm256_floor_pd(_mm256_fmadd_pd(x, kLog2e, _mm256_set1_pd(0.5)));
  x = _mm256_fnmadd_pd(n, kC1, x);
  x = _mm256_fnmadd_pd(n, kC2, x);

  __m256d xx = _mm256_mul_pd(x, x);
  __m256d p = _mm256_set1_pd(1.26177193074810590878e-4);
  p = _mm256_fmadd_pd(p, xx, _mm256_set1_pd(3.02994407707441961300e-2));
  p = _mm256_fmadd_pd(p, xx, _mm256_set1_pd(9.99999999999999999910e-1));
  p = _mm256_mul_pd(p, x);
  __m256d q = _mm256_set1_pd(3.00198505138664455042e-6);
  q = _mm256_fmadd_pd(q, xx, _mm256_set1_pd(2.52448340349684104192e-3));
  q = _mm256_fmadd_pd(q, xx, _mm256_set1_pd(2.27265548208155028766e-1));
  q = _mm256_fmadd_pd(q, xx, _mm256_set1_pd(2.0));
  __m256d r = _mm256_div_pd(p, _mm256_sub_pd(q, p));
  r = _mm256_fmadd_pd(_mm256_set1_pd(2.0), r, _mm256_set1_pd(1.0));

  __m128i n32 = _mm256_cvttpd_epi32(n);
  __m256i n64 = _mm256_cvtepi32_epi64(n32);
  n64 = _mm256_slli_epi64(_mm256_add_epi64(n64, _mm256_set1_epi64x(1023)), 52);
  return _mm256_mul_pd(r, _mm256_castsi256_pd(n64));
}

void vexp_avx2(const double* x, double* y, std::size_t n) {
  const __m256d lo = _mm256_set1_pd(kVexpLo);
  const __m256d hi = _mm256_set1_pd(kVexpHi);
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    __m256d v = _mm256_loadu_pd(x + i);
    v = _mm256_min_pd(_mm256_max_pd(v, lo), hi);
    _mm256_storeu_pd(y + i, exp4(v));
  }
  if (i < n) {
    // Run the tail through the same lane code so results do not depend on
    // where an element lands in the array.
    double tin[4] = {0.0, 0.0, 0.0, 0.0};
    double tout[4];
    std::memcpy(tin, x + i, (n - i) * sizeof(double));
    __m256d v = _mm256_loadu_pd(tin);
    v = _mm256_min_pd(_mm256_max_pd(v, lo), hi);
    _mm256_storeu_pd(tout, exp4(v));
    std::memcpy(y + i, tout, (n - i) * sizeof(double));
  }
}

void vnmul_avx2(const double* a, const double* b, double* out, std::size_t n) {
  const __m256d sign = _mm256_set1_pd(-0.0);
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    __m256d prod = _mm256_mul_pd(_mm256_loadu_pd(a + i), _mm256_loadu_pd(b + i));
    _mm256_storeu_pd(out + i, _mm256_xor_pd(prod, sign));
  }
  for (; i < n; ++i) out[i] = -(a[i] * b[i]);
}

inline double hsum(__m256d v) {
  __m128d lo = _mm256_castpd256_pd128(v);
  __m128d hi = _mm256_extractf128_pd(v, 1);
  lo = _mm_add_pd(lo, hi);
  return _mm_cvtsd_f64(_mm_add_sd(lo, _mm_unpackhi_pd(lo, lo)));
}

double dot_avx2(const double* a, const double* b, std::size_t n) {
  __m256d acc0 = _mm256_setzero_pd();
  __m256d acc1 = _mm256_setzero_pd();
  std::size_t i = 0;
  for (; i + 8 <= n; i += 8) {
    acc0 = _mm256_fmadd_pd(_mm256_loadu_pd(a + i), _mm256_loadu_pd(b + i), acc0);
    acc1 = _mm256_fmadd_pd(_mm256_loadu_pd(a + i + 4), _mm256_loadu_pd(b + i + 4), acc1);
  }
  for (; i + 4 <= n; i += 4) {
    acc0 = _mm256_fmadd_pd(_mm256_loadu_pd(a + i), _mm256_loadu_pd(b + i), acc0);
  }
  double s = hsum(_mm256_add_pd(acc0, acc1));
  for (; i < n; ++i) s += a[i] * b[i];
  return s;
}

double sum_avx2(const double* x, std::size_t n) {
  __m256d acc0 = _mm256_setzero_pd();
  __m256d acc1 = _mm256_setzero_pd();
  std::size_t i = 0;
  for (; i + 8 <= n; i += 8) {
    acc0 = _mm256_add_pd(acc0, _mm256_loadu_pd(x + i));
    acc1 = _mm256_add_pd(acc1, _mm256_loadu_pd(x + i + 4));
  }
  for (; i + 4 <= n; i += 4) acc0 = _mm256_add_pd(acc0, _mm256_loadu_pd(x + i));
  double s = hsum(_mm256_add_pd(acc0, acc1));
  for (; i < n; ++i) s += x[i];
  return s;
}

double max_abs_avx2(const double* x, std::size_t n) {
  const __m256d mask = _mm256_castsi256_pd(_mm256_set1_epi64x(0x7fffffffffffffffLL));
  __m256d m = _mm256_setzero_pd();
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    m = _mm256_max_pd(m, _mm256_and_pd(mask, _mm256_loadu_pd(x + i)));
  }
  double best = 0.0;
  double lanes[4];
  _mm256_storeu_pd(lanes, m);
  for (double v : lanes) best = best < v ? v : best;
  for (; i < n; ++i) {
    double v = std::fabs(x[i]);
    best = best < v ? v : best;
  }
  return best;
}

}  // namespace

const Ops& avx2_table() {
  static const Ops ops{vexp_avx2, vnmul_avx2, dot_avx2, sum_avx2, max_abs_avx2};
  return ops;
}

}  // namespace mva::kernels::detail
