#include "mva/market.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <stdexcept>
#include <string>
#include <vector>

#include "mva/kernels.hpp"
#include "mva/rng.hpp"

namespace mva {
namespace {

// Yield at offset q lying in pillar segment [s, s+1] (q may equal either
// end). Pillar hits return the stored value exactly; both the scalar and
// batched lookups funnel through this one expression so they agree bitwise.
inline double eval_in_segment(const ZeroCurve& c, double q, std::size_t s) {
  if (q == kTenors[s]) return c.zeros[s];
  if (q == kTenors[s + 1]) return c.zeros[s + 1];
  const double x0 = kTenors[s];
  const double x1 = kTenors[s + 1];
  return c.zeros[s] + (q - x0) / (x1 - x0) * (c.zeros[s + 1] - c.zeros[s]);
}

inline std::size_t segment_below(double tenor) {
  // Last pillar index <= tenor, capped so [s, s+1] is a valid segment.
  const auto it = std::upper_bound(kTenors.begin(), kTenors.end(), tenor);
  std::size_t s = static_cast<std::size_t>(it - kTenors.begin());
  if (s > 0) --s;
  if (s >= kTenorCount - 1) s = kTenorCount - 2;
  return s;
}

std::string format_double(double v) {
  char buf[32];
  auto [p, ec] = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, p);
}

constexpr double kMaxAbsShock = 5.0;

}  // namespace

ZeroCurve ZeroCurve::flat(double rate, double anchor) {
  ZeroCurve c;
  c.zeros.fill(rate);
  c.anchor = anchor;
  return c;
}

double interp_zero(const ZeroCurve& c, double tenor) {
  if (!(tenor >= 0.0)) {
    throw std::domain_error("interp_zero: tenor must be >= 0");
  }
  if (tenor >= kTenors.back()) return c.zeros.back();
  return eval_in_segment(c, tenor, segment_below(tenor));
}

double discount_factor(const ZeroCurve& c, double tenor) {
  // One-element strip through the same kernel as the batched version, so a
  // scalar query and a batched query of the same tenor agree bitwise.
  const double arg = -(interp_zero(c, tenor) * tenor);
  double out;
  kernels::active().vexp(&arg, &out, 1);
  return out;
}

void discount_factors(const ZeroCurve& c, std::span<const double> tenors,
                      std::span<double> out) {
  const std::size_t n = tenors.size();
  if (out.size() != n) {
    throw std::domain_error("discount_factors: output size mismatch");
  }
  double stack[128];
  std::vector<double> heap;
  double* args = stack;
  if (n > 128) {
    heap.resize(n);
    args = heap.data();
  }

  std::size_t s = 0;
  double prev = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double q = tenors[i];
    if (!(q >= 0.0) || (i > 0 && q < prev)) {
      throw std::domain_error("discount_factors: tenors must be ascending and >= 0");
    }
    prev = q;
    double y;
    if (q >= kTenors.back()) {
      y = c.zeros.back();
    } else {
      while (s + 2 < kTenorCount && q > kTenors[s + 1]) ++s;
      y = eval_in_segment(c, q, s);
    }
    args[i] = -(y * q);
  }
  kernels::active().vexp(args, out.data(), n);
}

double instantaneous_forward(const ZeroCurve& c, double t) {
  if (!(t >= 0.0)) {
    throw std::domain_error("instantaneous_forward: t must be >= 0");
  }
  if (t >= kTenors.back()) return c.zeros.back();
  const std::size_t s = segment_below(t);
  const double slope =
      (c.zeros[s + 1] - c.zeros[s]) / (kTenors[s + 1] - kTenors[s]);
  return eval_in_segment(c, t, s) + t * slope;
}

void validate_shock(const RelativeShock& s) {
  for (double v : s.rel) {
    if (!std::isfinite(v) || std::fabs(v) >= kMaxAbsShock) {
      throw std::domain_error("shock component out of range (finite, |s| < 5)");
    }
  }
}

void validate_shocks(const ShockSet& s) {
  if (s.empty()) throw std::domain_error("shock set must be non-empty");
  for (const auto& sh : s.shocks) validate_shock(sh);
}

ZeroCurve apply_shock(const ZeroCurve& c, const RelativeShock& s) {
  ZeroCurve out;
  out.anchor = c.anchor;
  for (std::size_t j = 0; j < kTenorCount; ++j) {
    out.zeros[j] = c.zeros[j] * (1.0 + s.rel[j]);
  }
  return out;
}

ShockSet shocks_from_history(const CurveSeries& series, std::size_t horizon) {
  if (horizon == 0) {
    throw std::domain_error("shocks_from_history: horizon must be >= 1");
  }
  if (series.size() < horizon + 1) {
    throw std::domain_error("shocks_from_history: need at least horizon + 1 rows");
  }
  ShockSet out;
  out.shocks.resize(series.size() - horizon);
  for (std::size_t q = 0; q < out.shocks.size(); ++q) {
    for (std::size_t j = 0; j < kTenorCount; ++j) {
      const double base = series.rows[q][j];
      out.shocks[q].rel[j] =
          base == 0.0 ? 0.0 : series.rows[q + horizon][j] / base - 1.0;
    }
    try {
      validate_shock(out.shocks[q]);
    } catch (const std::domain_error&) {
      throw std::domain_error("shocks_from_history: implausible move at row " +
                              std::to_string(q));
    }
  }
  out.provenance = "history:rows=" + std::to_string(series.size()) +
                   ",horizon=" + std::to_string(horizon);
  return out;
}

ShockSet synth_shock_set(std::uint64_t seed, std::size_t count, double max_rel) {
  if (count == 0) throw std::domain_error("synth_shock_set: count must be >= 1");
  if (!(max_rel >= 0.0) || max_rel >= kMaxAbsShock) {
    throw std::domain_error("synth_shock_set: max_rel must lie in [0, 5)");
  }

  // Factor loadings across the pillar grid: parallel move, steepener
  // pivoting near the 10y point, and a short/long-end butterfly.
  std::array<double, kTenorCount> w_slope;
  std::array<double, kTenorCount> w_curve;
  for (std::size_t j = 0; j < kTenorCount; ++j) {
    w_slope[j] = (kTenors[j] - 10.0) / 20.0;
    const double z = (kTenors[j] - 15.0) / 15.0;
    w_curve[j] = z * z - 0.5;
  }

  const std::size_t stress_lo = count / 2;
  const std::size_t stress_hi = stress_lo + std::max<std::size_t>(1, count / 10);

  Pcg64 rng(seed, kShockStream);
  ShockSet out;
  out.shocks.resize(count);
  for (std::size_t q = 0; q < count; ++q) {
    const double level = rng.normal();
    const double slope = rng.normal();
    const double curve = rng.normal();
    const double mult = (q >= stress_lo && q < stress_hi) ? 3.0 : 1.0;
    for (std::size_t j = 0; j < kTenorCount; ++j) {
      const double raw = 0.10 * level + 0.045 * slope * w_slope[j] +
                         0.025 * curve * w_curve[j] + 0.008 * rng.normal();
      out.shocks[q].rel[j] = mult * raw;
    }
  }

  // Rescale so the largest |component| is max_rel exactly.
  double peak = 0.0;
  std::size_t peak_q = 0, peak_j = 0;
  for (std::size_t q = 0; q < count; ++q) {
    for (std::size_t j = 0; j < kTenorCount; ++j) {
      const double a = std::fabs(out.shocks[q].rel[j]);
      if (a > peak) {
        peak = a;
        peak_q = q;
        peak_j = j;
      }
    }
  }
  if (max_rel == 0.0 || peak == 0.0) {
    for (auto& sh : out.shocks) sh.rel.fill(0.0);
  } else {
    const double scale = max_rel / peak;
    const double peak_sign = out.shocks[peak_q].rel[peak_j] < 0.0 ? -1.0 : 1.0;
    for (auto& sh : out.shocks) {
      for (double& v : sh.rel) v *= scale;
    }
    out.shocks[peak_q].rel[peak_j] = peak_sign * max_rel;
  }

  validate_shocks(out);
  out.provenance = "synth:seed=" + std::to_string(seed) +
                   ",count=" + std::to_string(count) +
                   ",max_rel=" + format_double(max_rel);
  return out;
}

}  // namespace mva
