#pragma once

#include <cmath>

namespace mva {

// Semiannual-style schedule arithmetic shared by trade pricing and the
// regression basis: coupon k (1-based) pays at k / freq. Times within
// kScheduleEps of a coupon date count as on-date; grid-aligned times are
// exact halves and never need the slack, it only absorbs representation
// dust in maturities like i * 30 / n.
inline constexpr double kScheduleEps = 1e-7;

// Index of the last coupon at or before maturity (0 if none).
inline long last_coupon_index(double maturity, int freq) {
  return static_cast<long>(std::floor(maturity * freq + kScheduleEps));
}

// Index of the first coupon strictly after t (a coupon at t has paid).
inline long first_coupon_index(double t, int freq) {
  return static_cast<long>(std::floor(t * freq + kScheduleEps)) + 1;
}

}  // namespace mva
