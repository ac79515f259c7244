#include "mva/simulation.hpp"

#include <cmath>
#include <stdexcept>

#include "mva/parallel.hpp"
#include "mva/rng.hpp"

namespace mva {
namespace {

double ln_p0(const ZeroCurve& c, double u) { return -(interp_zero(c, u) * u); }

}  // namespace

void validate_model(const ModelParams& m) {
  if (!(std::isfinite(m.mean_reversion) && m.mean_reversion > 0.0)) {
    throw std::domain_error("model: mean reversion must be > 0");
  }
  if (!(std::isfinite(m.sigma) && m.sigma >= 0.0)) {
    throw std::domain_error("model: sigma must be >= 0");
  }
  for (double z : m.base_curve.zeros) {
    if (!std::isfinite(z)) throw std::domain_error("model: base curve not finite");
  }
}

std::vector<double> SimGrid::semiannual(double horizon) {
  if (!(horizon > 0.0)) throw std::domain_error("semiannual: horizon must be > 0");
  const auto steps = static_cast<std::size_t>(std::floor(2.0 * horizon + 1e-9));
  std::vector<double> dates(steps + 1);
  for (std::size_t k = 0; k <= steps; ++k) dates[k] = 0.5 * static_cast<double>(k);
  return dates;
}

void validate_grid(const SimGrid& g) {
  if (g.dates.empty() || g.dates.front() != 0.0) {
    throw std::domain_error("grid: dates must start at 0");
  }
  for (std::size_t k = 1; k < g.dates.size(); ++k) {
    if (!(g.dates[k] > g.dates[k - 1])) {
      throw std::domain_error("grid: dates must be strictly increasing");
    }
  }
  if (g.n_paths < 2) throw std::domain_error("grid: n_paths must be >= 2");
}

PathGrid::PathGrid(const ModelParams& m, const SimGrid& g)
    : params_(m), grid_(g) {
  const std::size_t K = grid_.dates.size();
  const double a = params_.mean_reversion;
  const double s2 = params_.sigma * params_.sigma;

  alpha_.resize(K);
  recon_c0_.resize(K * kTenorCount);
  for (std::size_t k = 0; k < K; ++k) {
    const double t = grid_.dates[k];
    const double decay = 1.0 - std::exp(-a * t);
    alpha_[k] = instantaneous_forward(params_.base_curve, t) +
                s2 / (2.0 * a * a) * decay * decay;
    for (std::size_t j = 1; j < kTenorCount; ++j) {
      recon_c0_[k * kTenorCount + j] = -ln_a(k, t + kTenors[j]) / kTenors[j];
    }
  }
  for (std::size_t j = 1; j < kTenorCount; ++j) {
    const double tau = kTenors[j];
    recon_c1_[j] = (1.0 - std::exp(-a * tau)) / a / tau;
  }
  states_.assign(grid_.n_paths * K, 0.0);
  deflators_.assign(grid_.n_paths * K, 1.0);
}

double PathGrid::ln_a(std::size_t k, double T) const {
  const double t = grid_.dates[k];
  const double a = params_.mean_reversion;
  const double s2 = params_.sigma * params_.sigma;
  const double b = (1.0 - std::exp(-a * (T - t))) / a;
  return ln_p0(params_.base_curve, T) - ln_p0(params_.base_curve, t) +
         b * instantaneous_forward(params_.base_curve, t) -
         s2 / (4.0 * a) * b * b * (1.0 - std::exp(-2.0 * a * t));
}

double PathGrid::bond_ln_price(std::size_t k, double T, double short_rate) const {
  if (!(T >= grid_.dates[k])) {
    throw std::domain_error("bond_ln_price: T must be >= date(k)");
  }
  const double a = params_.mean_reversion;
  const double b = (1.0 - std::exp(-a * (T - grid_.dates[k]))) / a;
  return ln_a(k, T) - b * short_rate;
}

ZeroCurve PathGrid::curve_at(std::size_t p, std::size_t k) const {
  ZeroCurve out;
  out.anchor = grid_.dates[k];
  const double r = short_rate(p, k);
  out.zeros[0] = r;
  const double* c0 = &recon_c0_[k * kTenorCount];
  for (std::size_t j = 1; j < kTenorCount; ++j) {
    out.zeros[j] = c0[j] + recon_c1_[j] * r;
  }
  return out;
}

PathGrid simulate(const ModelParams& m, const SimGrid& g) {
  validate_model(m);
  validate_grid(g);
  PathGrid pg(m, g);

  const std::size_t K = g.dates.size();
  const double a = m.mean_reversion;
  std::vector<double> decay(K, 0.0);
  std::vector<double> vol(K, 0.0);
  for (std::size_t k = 1; k < K; ++k) {
    const double dt = g.dates[k] - g.dates[k - 1];
    decay[k] = std::exp(-a * dt);
    vol[k] = m.sigma * std::sqrt((1.0 - decay[k] * decay[k]) / (2.0 * a));
  }

  parallel_for(g.n_paths, [&](std::size_t p) {
    Pcg64 rng(g.seed, p);
    double* states = &pg.states_[p * K];
    double* defl = &pg.deflators_[p * K];
    double x = 0.0;
    double log_defl = 0.0;
    double r_prev = pg.alpha_[0];
    states[0] = 0.0;
    defl[0] = 1.0;
    for (std::size_t k = 1; k < K; ++k) {
      x = x * decay[k] + vol[k] * rng.normal();
      const double r = x + pg.alpha_[k];
      log_defl -= 0.5 * (r_prev + r) * (g.dates[k] - g.dates[k - 1]);
      states[k] = x;
      defl[k] = std::exp(log_defl);
      r_prev = r;
    }
  });
  return pg;
}

std::vector<double> simulate_ou(const OuParams& params,
                                std::span<const double> dates,
                                std::size_t n_paths, std::uint64_t seed) {
  if (!(std::isfinite(params.eta) && params.eta > 0.0)) {
    throw std::domain_error("ou: eta must be > 0");
  }
  if (!(std::isfinite(params.sigma) && params.sigma >= 0.0)) {
    throw std::domain_error("ou: sigma must be >= 0");
  }
  if (dates.empty() || n_paths == 0) {
    throw std::domain_error("ou: need dates and at least one path");
  }
  for (std::size_t k = 1; k < dates.size(); ++k) {
    if (!(dates[k] > dates[k - 1])) {
      throw std::domain_error("ou: dates must be strictly increasing");
    }
  }

  const std::size_t K = dates.size();
  std::vector<double> decay(K, 0.0);
  std::vector<double> vol(K, 0.0);
  for (std::size_t k = 1; k < K; ++k) {
    const double dt = dates[k] - dates[k - 1];
    decay[k] = std::exp(-params.eta * dt);
    vol[k] = params.sigma *
             std::sqrt((1.0 - decay[k] * decay[k]) / (2.0 * params.eta));
  }

  std::vector<double> states(n_paths * K);
  parallel_for(n_paths, [&](std::size_t p) {
    Pcg64 rng(seed, p);
    double x = params.x0;
    states[p * K] = x;
    for (std::size_t k = 1; k < K; ++k) {
      x = params.mu + (x - params.mu) * decay[k] + vol[k] * rng.normal();
      states[p * K + k] = x;
    }
  });
  return states;
}

}  // namespace mva
