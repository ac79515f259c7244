#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

#include "mva/market.hpp"

namespace mva {

// Vanilla fixed-for-floating swap. Both legs pay on the same schedule:
// coupon dates k/freq for k = 1, 2, ... up to maturity, anchored at time 0
// with year fraction exactly 1/freq and no stubs (any residual period past
// the last whole coupon is dropped; maturity < 1/freq means no cashflows).
// `gearing` scales the floating leg. A payer swap pays fixed.
struct Swap {
  double notional = 0.0;
  double fixed_rate = 0.0;
  double gearing = 1.0;
  double maturity = 0.0;
  bool is_payer = true;
  int freq = 2;
};

void validate_swap(const Swap& s);  // throws std::domain_error

using Portfolio = std::vector<Swap>;

double gross_notional(const Portfolio& p);
Portfolio mirrored(const Portfolio& p);  // flips every is_payer flag
void validate_portfolio(const Portfolio& p);

// Pricing at valuation time t on a curve observed at t: the curve is read
// at offsets T - t for each remaining coupon date T > t (a coupon exactly
// at t has just paid and is excluded). Values are in currency units.
//
//   annuity  = (1/freq) * sum df(T_i - t)
//   float pv = gearing * (1 - df(T_last - t))
//   swap     = notional * (+1 payer | -1 receiver) * (float pv - K * annuity)
//
// A swap with no remaining coupons prices to exactly 0.
double price_annuity(const ZeroCurve& c, double t, double maturity,
                     int freq = 2);
double price_swap(const ZeroCurve& c, double t, const Swap& s);
double price_portfolio(const ZeroCurve& c, double t, const Portfolio& p);

// Fixed rate that zeroes a unit payer swap with gearing 1; throws
// std::domain_error when no coupons remain.
double par_rate(const ZeroCurve& c, double t, double maturity, int freq = 2);

// Synthetic book: swap i (1-based) has maturity i * 30 / n and draws, in
// this order, notional 1e8 * (0.5 + U), strike strike_base * (y + U),
// gearing 0.5 + U, payer flag U < p_payer, from Pcg64(seed,
// kPortfolioStream). `y` shifts the whole book's strike distribution; the
// generated book is payer-heavy for p_payer near 1.
struct PortfolioRecipe {
  std::size_t n = 1000;
  double p_payer = 0.9;
  double strike_base = 0.025;
  double y = 1.0;
  std::uint64_t seed = 1;
};

Portfolio generate_portfolio(const PortfolioRecipe& r);

}  // namespace mva
