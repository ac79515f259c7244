#pragma once

#include <cstddef>
#include <string>
#include <vector>

namespace mva::kernels {

// Data-parallel primitives behind the pricing hot loops: discount-factor
// strips (vexp), regression evaluation (dot), profile reductions (sum),
// and loss post-processing. Each primitive has a scalar reference
// implementation and SIMD variants selected at runtime.
//
// Contracts (all variants):
//  * vexp: y[i] = exp(x[i]). Inputs are clamped to [-708, 709] before
//    exponentiation; NaN inputs are outside the contract. Results are
//    elementwise deterministic: a given input double produces the same
//    output double regardless of array length or position.
//  * vnmul: out[i] = -(a[i] * b[i]). Exact (one IEEE multiply, one sign
//    flip), so all variants agree bitwise.
//  * dot: sum_i a[i]*b[i]. SIMD variants use wider accumulators, so they
//    may differ from scalar by rounding; tests pin the tolerance.
//  * sum: sum_i x[i], same accumulation caveat as dot.
//  * max_abs: max_i |x[i]|, 0 for n == 0. Exact (no rounding), bitwise
//    equal across variants.
// Aliasing: out may equal an input for vexp/vnmul; partial overlap is not
// supported.

enum class Backend { scalar, avx2, neon };

struct Ops {
  void (*vexp)(const double* x, double* y, std::size_t n);
  void (*vnmul)(const double* a, const double* b, double* out, std::size_t n);
  double (*dot)(const double* a, const double* b, std::size_t n);
  double (*sum)(const double* x, std::size_t n);
  double (*max_abs)(const double* x, std::size_t n);
};

// Largest input magnitude vexp exponentiates before saturating.
inline constexpr double kVexpLo = -708.0;
inline constexpr double kVexpHi = 709.0;

bool available(Backend b);
std::vector<Backend> available_backends();
const Ops& table(Backend b);  // throws std::domain_error if unavailable

// Process-wide active table. First use auto-selects the best available
// backend; the MVA_KERNEL environment variable ("scalar", "avx2", "neon",
// "auto") overrides auto-selection. Selection is not thread-safe against
// concurrent kernel use; select once up front.
const Ops& active();
Backend active_backend();
bool select(Backend b);  // false (and no change) if unavailable
void select_auto();

std::string name(Backend b);
Backend backend_from_name(const std::string& s);  // throws std::domain_error

}  // namespace mva::kernels
