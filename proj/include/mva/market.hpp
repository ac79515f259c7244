#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

namespace mva {

// Canonical tenor grid shared by every curve, shock, and historical row in
// the system. Fixed at compile time: 18 pillars, first 0, strictly
// increasing, 30y last.
inline constexpr std::size_t kTenorCount = 18;
inline constexpr std::array<double, kTenorCount> kTenors = {
    0.0, 0.5, 1.0, 2.0,  3.0,  4.0,  5.0,  6.0,  7.0,
    8.0, 9.0, 10.0, 11.0, 12.0, 15.0, 20.0, 25.0, 30.0};

namespace detail {
constexpr bool tenors_strictly_increasing() {
  for (std::size_t i = 1; i < kTenorCount; ++i) {
    if (!(kTenors[i] > kTenors[i - 1])) return false;
  }
  return true;
}
}  // namespace detail
static_assert(kTenors[0] == 0.0 && detail::tenors_strictly_increasing());

// Continuously-compounded zero curve on the canonical pillars. `anchor` is
// the observation time of the curve; all tenor arguments below are offsets
// from the anchor. Interpolation is linear in the zero yield between
// pillars, flat beyond the last pillar. Querying a pillar tenor returns the
// stored value exactly.
struct ZeroCurve {
  std::array<double, kTenorCount> zeros{};
  double anchor = 0.0;

  static ZeroCurve flat(double rate, double anchor = 0.0);
};

double interp_zero(const ZeroCurve& c, double tenor);  // tenor >= 0
double discount_factor(const ZeroCurve& c, double tenor);

// Batched discount factors for an ascending tenor strip; the workhorse of
// swap pricing. Equivalent to calling discount_factor per element (same
// interpolation, same exp kernel). tenors must be ascending and >= 0;
// out.size() == tenors.size().
void discount_factors(const ZeroCurve& c, std::span<const double> tenors,
                      std::span<double> out);

// Instantaneous forward f(t) = y(t) + t*y'(t), taking the right-hand slope
// at pillars (flat beyond the last pillar). Piecewise linear yields make
// this piecewise affine with jumps at pillar boundaries.
double instantaneous_forward(const ZeroCurve& c, double t);

// One relative shock per pillar: yield r_j maps to r_j * (1 + rel[j]).
// Components must be finite with |rel[j]| < 5.
struct RelativeShock {
  std::array<double, kTenorCount> rel{};
};

struct ShockSet {
  std::vector<RelativeShock> shocks;
  std::string provenance;  // human-readable origin, e.g. "synth:seed=7,count=200"

  std::size_t size() const { return shocks.size(); }
  bool empty() const { return shocks.empty(); }
};

void validate_shock(const RelativeShock& s);  // throws std::domain_error
void validate_shocks(const ShockSet& s);

// Applies a relative shock pillar-by-pillar. Exact at zero shock: the
// output curve is bitwise equal to the input when every component is 0.
ZeroCurve apply_shock(const ZeroCurve& c, const RelativeShock& s);

// Historical yield-curve rows (one per business day), all on the canonical
// grid. Dates are ISO strings kept only for provenance.
struct CurveSeries {
  std::vector<std::string> dates;
  std::vector<std::array<double, kTenorCount>> rows;

  std::size_t size() const { return rows.size(); }
};

// Overlapping relative moves over `horizon` rows: shock q has component
// rows[q + horizon][j] / rows[q][j] - 1, with zero-yield pillars mapped to
// a zero shock component. Produces size() - horizon shocks; requires at
// least horizon + 1 rows. Throws std::domain_error if any resulting
// component violates the shock validity bound.
ShockSet shocks_from_history(const CurveSeries& series, std::size_t horizon);

// Deterministic synthetic shock generator for self-contained runs and
// stress tests. Shocks combine level, slope, and curvature factor moves
// with small pillar-specific noise; a contiguous window of rows (a tenth of
// the set, starting at count/2) gets a 3x magnitude multiplier to play the
// role of a stressed period. The whole set is rescaled so the largest
// absolute component equals max_rel exactly (all-zero when max_rel == 0).
// Draw order per shock: level, slope, curvature, then 18 pillar noises,
// all from Pcg64(seed, kShockStream).
ShockSet synth_shock_set(std::uint64_t seed, std::size_t count,
                         double max_rel = 0.3);

}  // namespace mva
