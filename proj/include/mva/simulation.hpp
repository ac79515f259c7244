#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "mva/market.hpp"

namespace mva {

// One-factor short-rate model with mean reversion `a`, volatility `sigma`,
// fitted to the base curve: r(t) = x(t) + alpha(t) with
//
//   alpha(t) = f(0,t) + (sigma^2 / 2a^2) * (1 - e^{-a t})^2,
//
// x an Ornstein-Uhlenbeck factor started at 0 and reverting to 0. Bonds are
// affine in the short rate,
//
//   ln P(t,T) = ln A(t,T) - B(T - t) * r(t),
//   B(tau)    = (1 - e^{-a tau}) / a,
//   ln A(t,T) = ln P0(T) - ln P0(t) + B * f(0,t)
//               - (sigma^2 / 4a) * B^2 * (1 - e^{-2 a t}),
//
// which is what curve_at uses to rebuild an 18-pillar zero curve from a
// single simulated state.
struct ModelParams {
  double mean_reversion = 0.03;  // a, must be > 0
  double sigma = 0.01;           // must be >= 0
  ZeroCurve base_curve = ZeroCurve::flat(0.025);
};

void validate_model(const ModelParams& m);

struct SimGrid {
  std::vector<double> dates;  // stopping dates; first must be 0, increasing
  std::size_t n_paths = 1024;
  std::uint64_t seed = 0;

  // 0, 0.5, ..., horizon in exact half-year steps.
  static std::vector<double> semiannual(double horizon = 30.0);
};

void validate_grid(const SimGrid& g);

// Simulated factor states and pathwise numeraire deflators on the grid.
// States use the exact OU transition; the deflator approximates
// exp(-int r du) by trapezoidal integration of r over the stopping dates,
// so deflator(p, 0) == 1 exactly. Storage is row-major per path; path p is
// driven by Pcg64(seed, p) regardless of thread count.
class PathGrid {
 public:
  PathGrid(const ModelParams& m, const SimGrid& g);

  std::size_t n_paths() const { return grid_.n_paths; }
  std::size_t n_dates() const { return grid_.dates.size(); }
  const std::vector<double>& dates() const { return grid_.dates; }
  double date(std::size_t k) const { return grid_.dates[k]; }
  const ModelParams& model() const { return params_; }
  std::uint64_t seed() const { return grid_.seed; }

  double state(std::size_t p, std::size_t k) const {
    return states_[p * n_dates() + k];
  }
  double short_rate(std::size_t p, std::size_t k) const {
    return state(p, k) + alpha_[k];
  }
  double deflator(std::size_t p, std::size_t k) const {
    return deflators_[p * n_dates() + k];
  }
  double alpha(std::size_t k) const { return alpha_[k]; }

  // Zero curve at (path, date), anchored at date(k). zeros[0] is the short
  // rate itself; later pillars come from the affine bond formula.
  ZeroCurve curve_at(std::size_t p, std::size_t k) const;

  // ln P(t_k, T) for a given short rate at t_k; T >= date(k). Used by the
  // martingale checks and the curve reconstruction table.
  double bond_ln_price(std::size_t k, double T, double short_rate) const;

 private:
  friend PathGrid simulate(const ModelParams&, const SimGrid&);
  double ln_a(std::size_t k, double T) const;

  ModelParams params_;
  SimGrid grid_;
  std::vector<double> states_;     // [p * K + k]
  std::vector<double> deflators_;  // [p * K + k]
  std::vector<double> alpha_;      // [k]
  std::vector<double> recon_c0_;   // [k * kTenorCount + j], j >= 1
  std::array<double, kTenorCount> recon_c1_{};  // B(tau_j) / tau_j
};

PathGrid simulate(const ModelParams& m, const SimGrid& g);

inline ZeroCurve curve_at(const PathGrid& pg, std::size_t p, std::size_t k) {
  return pg.curve_at(p, k);
}

// Standalone mean-reverting diagnostic process (exact transitions),
// x(0) = x0, reverting to mu at speed eta. Returns row-major [p * K + k]
// states; path p draws from Pcg64(seed, p).
struct OuParams {
  double x0 = 1.0;
  double mu = 1.0;
  double eta = 0.25;   // must be > 0
  double sigma = 0.3;  // must be >= 0
};

std::vector<double> simulate_ou(const OuParams& params,
                                std::span<const double> dates,
                                std::size_t n_paths, std::uint64_t seed);

}  // namespace mva
