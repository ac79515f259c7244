#include "mva/lsac.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <vector>

#include "mva/kernels.hpp"
#include "mva/parallel.hpp"
#include "mva/schedule.hpp"

namespace mva {
namespace {

constexpr int kBasisFreq = 2;
constexpr std::size_t kMaxBasisM = 60;
constexpr double kRankThreshold = 1e-10;

// One stack frame's worth of basis scratch; spec.size() <= 121.
constexpr std::size_t kMaxBasisSize = 2 * kMaxBasisM + 1;

double im_from_losses(std::span<const double> losses, const ImMethod& method) {
  const VarEs ve = var_es_from_losses(losses, method.confidence);
  const double stat = method.kind == ImKind::var ? ve.var : ve.es;
  return stat > 0.0 ? stat : 0.0;
}

}  // namespace

BasisSpec BasisSpec::make(std::size_t m, const ZeroCurve& base, double horizon) {
  if (m < 1 || m > kMaxBasisM) {
    throw std::domain_error("basis: m must lie in [1, 60]");
  }
  if (!(horizon > 0.0)) throw std::domain_error("basis: horizon must be > 0");
  BasisSpec spec;
  spec.end_dates.resize(m);
  spec.strikes.resize(m);
  for (std::size_t j = 0; j < m; ++j) {
    spec.end_dates[j] =
        horizon * static_cast<double>(j + 1) / static_cast<double>(m);
    spec.strikes[j] = par_rate(base, 0.0, spec.end_dates[j], kBasisFreq);
  }
  return spec;
}

void basis_values(const ZeroCurve& c, double t, const BasisSpec& spec,
                  std::span<double> out) {
  const std::size_t m = spec.end_dates.size();
  if (out.size() != spec.size()) {
    throw std::domain_error("basis_values: output size mismatch");
  }
  out[0] = 1.0;
  if (m == 0) return;

  const long first = first_coupon_index(t, kBasisFreq);
  const long last_all = last_coupon_index(spec.end_dates.back(), kBasisFreq);
  if (first > last_all) {
    // Everything matured; only the constant survives.
    for (std::size_t j = 0; j < 2 * m; ++j) out[1 + j] = 0.0;
    return;
  }

  // One shared discounted coupon strip covers every basis instrument:
  // instrument j uses the prefix of it ending at its own last coupon.
  const std::size_t n = static_cast<std::size_t>(last_all - first + 1);
  if (n > 128) throw std::domain_error("basis_values: horizon too long");
  double offsets[128];
  double dfs[128];
  double prefix[128];
  for (std::size_t i = 0; i < n; ++i) {
    offsets[i] = static_cast<double>(first + static_cast<long>(i)) /
                     kBasisFreq - t;
  }
  discount_factors(c, {offsets, n}, {dfs, n});
  double acc = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    acc += dfs[i];
    prefix[i] = acc;
  }

  for (std::size_t j = 0; j < m; ++j) {
    const long last_j = last_coupon_index(spec.end_dates[j], kBasisFreq);
    if (last_j < first) {
      out[1 + j] = 0.0;
      out[1 + m + j] = 0.0;
      continue;
    }
    const std::size_t pos = static_cast<std::size_t>(last_j - first);
    const double annuity = (1.0 / kBasisFreq) * prefix[pos];
    const double float_pv = 1.0 - dfs[pos];
    out[1 + j] = float_pv - spec.strikes[j] * annuity;
    out[1 + m + j] = annuity;
  }
}

ZeroCurve shocked_state(const PathGrid& pg, const ShockSet& s, std::size_t p,
                        std::size_t k) {
  if (s.empty()) throw std::domain_error("shocked_state: empty shock set");
  return apply_shock(pg.curve_at(p, k), s.shocks[assigned_shock_index(s, p)]);
}

RegressionSet fit_regressions(const PathGrid& pg, const Portfolio& portfolio,
                              const ShockSet& shocks, const BasisSpec& spec) {
  validate_shocks(shocks);
  const std::size_t P = pg.n_paths();
  const std::size_t K = pg.n_dates();
  const std::size_t B = spec.size();
  if (P < B) {
    throw std::domain_error("fit_regressions: need at least as many paths as basis functions");
  }

  RegressionSet rs;
  rs.spec = spec;
  rs.dates = pg.dates();
  rs.fits.resize(K);
  rs.gross_notional = gross_notional(portfolio);
  const double gross = rs.gross_notional;

  parallel_for(K, [&](std::size_t k) {
    const double t = pg.date(k);
    Eigen::MatrixXd X(P, B);
    Eigen::VectorXd y(P);
    double basis[kMaxBasisSize];
    for (std::size_t p = 0; p < P; ++p) {
      const ZeroCurve c = shocked_state(pg, shocks, p, k);
      basis_values(c, t, spec, {basis, B});
      for (std::size_t j = 0; j < B; ++j) X(p, j) = basis[j];
      y(p) = price_portfolio(c, t, portfolio);
    }

    // Scale columns to unit standard deviation so the rank threshold acts
    // on comparable magnitudes; zero-variance columns (the constant, dead
    // instruments) keep scale 1.
    Eigen::VectorXd scale(B);
    for (std::size_t j = 0; j < B; ++j) {
      const double mean = X.col(j).mean();
      const double var =
          (X.col(j).array() - mean).square().sum() / static_cast<double>(P);
      const double sd = std::sqrt(var);
      scale(j) = sd > 0.0 ? sd : 1.0;
    }
    Eigen::MatrixXd Xs = X * scale.cwiseInverse().asDiagonal();

    Eigen::CompleteOrthogonalDecomposition<Eigen::MatrixXd> cod;
    cod.setThreshold(kRankThreshold);
    cod.compute(Xs);
    Eigen::VectorXd beta = cod.solve(y).cwiseQuotient(scale);

    DateFit& fit = rs.fits[k];
    fit.coeffs.assign(beta.data(), beta.data() + B);
    fit.rank = static_cast<int>(cod.rank());
    fit.rank_deficient = fit.rank < static_cast<int>(B);
    const Eigen::VectorXd resid = X * beta - y;
    const double to_bps = gross > 0.0 ? 1e4 / gross : 0.0;
    fit.mean_abs_err_bps = resid.cwiseAbs().mean() * to_bps;
    fit.max_abs_err_bps = resid.cwiseAbs().maxCoeff() * to_bps;
  });
  return rs;
}

double eval_portfolio(const RegressionSet& rs, std::size_t k,
                      const ZeroCurve& c) {
  const DateFit& fit = rs.fits.at(k);
  double basis[kMaxBasisSize];
  basis_values(c, rs.dates[k], rs.spec, {basis, rs.spec.size()});
  return kernels::active().dot(fit.coeffs.data(), basis, rs.spec.size());
}

double order_stat_quantile(std::span<const double> values, double q) {
  if (values.empty()) throw std::domain_error("quantile: empty sample");
  if (!(q > 0.0 && q <= 1.0)) throw std::domain_error("quantile: q must lie in (0, 1]");
  std::vector<double> sorted(values.begin(), values.end());
  std::sort(sorted.begin(), sorted.end());
  auto idx = static_cast<std::size_t>(
      std::ceil(q * static_cast<double>(sorted.size())));
  if (idx < 1) idx = 1;
  if (idx > sorted.size()) idx = sorted.size();
  return sorted[idx - 1];
}

VarEs var_es_from_losses(std::span<const double> losses, double confidence) {
  if (losses.size() < 2) {
    throw std::domain_error("var_es: need at least 2 losses");
  }
  if (!(confidence > 0.5 && confidence < 1.0)) {
    throw std::domain_error("var_es: confidence must lie in (0.5, 1)");
  }
  std::vector<double> sorted(losses.begin(), losses.end());
  std::sort(sorted.begin(), sorted.end());
  auto idx = static_cast<std::size_t>(
      std::ceil(confidence * static_cast<double>(sorted.size())));
  if (idx < 1) idx = 1;
  if (idx > sorted.size()) idx = sorted.size();

  VarEs out;
  out.var = sorted[idx - 1];
  double acc = 0.0;
  for (std::size_t i = idx - 1; i < sorted.size(); ++i) acc += sorted[i];
  out.es = acc / static_cast<double>(sorted.size() - idx + 1);
  return out;
}

namespace {

double compute_im_buffered(const RegressionSet& rs, const PathGrid& pg,
                           const ShockSet& shocks, const ImMethod& method,
                           std::size_t p, std::size_t k,
                           std::vector<double>& losses) {
  const ZeroCurve base_curve = pg.curve_at(p, k);
  const double base = eval_portfolio(rs, k, base_curve);
  losses.resize(shocks.size());
  for (std::size_t q = 0; q < shocks.size(); ++q) {
    losses[q] =
        base - eval_portfolio(rs, k, apply_shock(base_curve, shocks.shocks[q]));
  }
  return im_from_losses(losses, method);
}

}  // namespace

double compute_im(const RegressionSet& rs, const PathGrid& pg,
                  const ShockSet& shocks, const ImMethod& method,
                  std::size_t p, std::size_t k) {
  if (shocks.size() < 2) {
    throw std::domain_error("compute_im: need at least 2 shocks");
  }
  std::vector<double> losses;
  return compute_im_buffered(rs, pg, shocks, method, p, k, losses);
}

ImProfile im_profile(const RegressionSet& rs, const PathGrid& pg,
                     const ShockSet& shocks, const ImMethod& method) {
  if (shocks.size() < 2) {
    throw std::domain_error("im_profile: need at least 2 shocks");
  }
  if (rs.dates != pg.dates()) {
    throw std::domain_error("im_profile: regression grid mismatch");
  }
  const std::size_t P = pg.n_paths();
  const std::size_t K = pg.n_dates();

  ImProfile prof;
  prof.dates = pg.dates();
  prof.n_paths = P;
  prof.per_path.resize(P * K);
  prof.expected_im.assign(K, 0.0);

  parallel_for(P, [&](std::size_t p) {
    std::vector<double> losses;
    for (std::size_t k = 0; k < K; ++k) {
      prof.per_path[p * K + k] =
          compute_im_buffered(rs, pg, shocks, method, p, k, losses);
    }
  });

  for (std::size_t k = 0; k < K; ++k) {
    double acc = 0.0;
    for (std::size_t p = 0; p < P; ++p) acc += prof.per_path[p * K + k];
    prof.expected_im[k] = acc / static_cast<double>(P);
  }
  return prof;
}

std::vector<double> mean_value_profile(const RegressionSet& rs,
                                       const PathGrid& pg) {
  if (rs.dates != pg.dates()) {
    throw std::domain_error("mean_value_profile: regression grid mismatch");
  }
  const std::size_t P = pg.n_paths();
  const std::size_t K = pg.n_dates();
  std::vector<double> values(P * K);
  parallel_for(P, [&](std::size_t p) {
    for (std::size_t k = 0; k < K; ++k) {
      values[p * K + k] = eval_portfolio(rs, k, pg.curve_at(p, k));
    }
  });
  std::vector<double> mean(K, 0.0);
  for (std::size_t k = 0; k < K; ++k) {
    double acc = 0.0;
    for (std::size_t p = 0; p < P; ++p) acc += values[p * K + k];
    mean[k] = acc / static_cast<double>(P);
  }
  return mean;
}

}  // namespace mva
