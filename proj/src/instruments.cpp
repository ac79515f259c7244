#include "mva/instruments.hpp"

#include <cmath>
#include <stdexcept>
#include <vector>

#include "mva/kernels.hpp"
#include "mva/rng.hpp"
#include "mva/schedule.hpp"

namespace mva {
namespace {

struct Strip {
  double stack[128];
  std::vector<double> heap;
  double* data = stack;

  double* acquire(std::size_t n) {
    if (n > 128) {
      heap.resize(n);
      data = heap.data();
    }
    return data;
  }
};

// Discounted coupon strip for dates (first..last)/freq as seen from t.
// Returns the number of coupons; dfs holds their discount factors.
std::size_t coupon_dfs(const ZeroCurve& c, double t, long first, long last,
                       int freq, Strip& offsets, Strip& dfs) {
  const std::size_t n = static_cast<std::size_t>(last - first + 1);
  double* off = offsets.acquire(n);
  double* df = dfs.acquire(n);
  const double inv_freq = 1.0 / freq;
  for (std::size_t i = 0; i < n; ++i) {
    off[i] = static_cast<double>(first + static_cast<long>(i)) * inv_freq - t;
  }
  discount_factors(c, {off, n}, {df, n});
  return n;
}

}  // namespace

void validate_swap(const Swap& s) {
  if (!(std::isfinite(s.notional) && s.notional > 0.0)) {
    throw std::domain_error("swap: notional must be > 0");
  }
  if (!(std::isfinite(s.gearing) && s.gearing > 0.0)) {
    throw std::domain_error("swap: gearing must be > 0");
  }
  if (!(std::isfinite(s.maturity) && s.maturity > 0.0 &&
        s.maturity <= kTenors[kTenorCount - 1])) {
    throw std::domain_error("swap: maturity must lie in (0, 30]");
  }
  if (!std::isfinite(s.fixed_rate)) {
    throw std::domain_error("swap: fixed_rate must be finite");
  }
  if (s.freq < 1) {
    throw std::domain_error("swap: freq must be >= 1");
  }
}

void validate_portfolio(const Portfolio& p) {
  for (const Swap& s : p) validate_swap(s);
}

double gross_notional(const Portfolio& p) {
  double g = 0.0;
  for (const Swap& s : p) g += std::fabs(s.notional);
  return g;
}

Portfolio mirrored(const Portfolio& p) {
  Portfolio out = p;
  for (Swap& s : out) s.is_payer = !s.is_payer;
  return out;
}

double price_annuity(const ZeroCurve& c, double t, double maturity, int freq) {
  if (!(t >= 0.0)) throw std::domain_error("price_annuity: t must be >= 0");
  if (freq < 1) throw std::domain_error("price_annuity: freq must be >= 1");
  const long first = first_coupon_index(t, freq);
  const long last = last_coupon_index(maturity, freq);
  if (first > last) return 0.0;
  Strip offsets, dfs;
  const std::size_t n = coupon_dfs(c, t, first, last, freq, offsets, dfs);
  return (1.0 / freq) * kernels::active().sum(dfs.data, n);
}

double price_swap(const ZeroCurve& c, double t, const Swap& s) {
  if (!(t >= 0.0)) throw std::domain_error("price_swap: t must be >= 0");
  const long first = first_coupon_index(t, s.freq);
  const long last = last_coupon_index(s.maturity, s.freq);
  if (first > last) return 0.0;
  Strip offsets, dfs;
  const std::size_t n = coupon_dfs(c, t, first, last, s.freq, offsets, dfs);
  const double annuity = (1.0 / s.freq) * kernels::active().sum(dfs.data, n);
  const double float_pv = 1.0 - dfs.data[n - 1];
  const double sign = s.is_payer ? 1.0 : -1.0;
  return s.notional * sign * (s.gearing * float_pv - s.fixed_rate * annuity);
}

double price_portfolio(const ZeroCurve& c, double t, const Portfolio& p) {
  double v = 0.0;
  for (const Swap& s : p) v += price_swap(c, t, s);
  return v;
}

double par_rate(const ZeroCurve& c, double t, double maturity, int freq) {
  if (!(t >= 0.0)) throw std::domain_error("par_rate: t must be >= 0");
  if (freq < 1) throw std::domain_error("par_rate: freq must be >= 1");
  const long first = first_coupon_index(t, freq);
  const long last = last_coupon_index(maturity, freq);
  if (first > last) {
    throw std::domain_error("par_rate: no coupons remain");
  }
  Strip offsets, dfs;
  const std::size_t n = coupon_dfs(c, t, first, last, freq, offsets, dfs);
  const double annuity = (1.0 / freq) * kernels::active().sum(dfs.data, n);
  const double float_pv = 1.0 - dfs.data[n - 1];
  return float_pv / annuity;
}

Portfolio generate_portfolio(const PortfolioRecipe& r) {
  if (r.n == 0) throw std::domain_error("portfolio recipe: n must be >= 1");
  if (!(r.p_payer >= 0.0 && r.p_payer <= 1.0)) {
    throw std::domain_error("portfolio recipe: p_payer must lie in [0, 1]");
  }
  if (!(std::isfinite(r.strike_base) && std::isfinite(r.y) && r.y >= 0.0)) {
    throw std::domain_error("portfolio recipe: bad strike parameters");
  }
  Pcg64 rng(r.seed, kPortfolioStream);
  Portfolio out;
  out.reserve(r.n);
  for (std::size_t i = 1; i <= r.n; ++i) {
    Swap s;
    s.maturity = 30.0 * static_cast<double>(i) / static_cast<double>(r.n);
    s.notional = 1e8 * (0.5 + rng.uniform());
    s.fixed_rate = r.strike_base * (r.y + rng.uniform());
    s.gearing = 0.5 + rng.uniform();
    s.is_payer = rng.uniform() < r.p_payer;
    validate_swap(s);
    out.push_back(s);
  }
  return out;
}

}  // namespace mva
