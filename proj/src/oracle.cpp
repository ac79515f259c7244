#include "mva/oracle.hpp"

#include <algorithm>
#include <cmath>

#include "mva/parallel.hpp"

namespace mva {

BudgetExceeded::BudgetExceeded(std::uint64_t estimate, std::uint64_t budget)
    : std::runtime_error(
          "brute-force oracle refused: estimated " + std::to_string(estimate) +
          " trade evaluations exceed the budget of " + std::to_string(budget)),
      estimate_(estimate) {}

std::uint64_t brute_force_cost(const PathGrid& pg, const Portfolio& p,
                               const ShockSet& shocks) {
  const std::uint64_t trades = p.empty() ? 1 : p.size();
  return static_cast<std::uint64_t>(pg.n_paths()) * pg.n_dates() *
         shocks.size() * trades;
}

ImProfile brute_force_im_profile(const PathGrid& pg, const Portfolio& p,
                                 const ShockSet& shocks,
                                 const ImMethod& method,
                                 const OracleBudget& budget) {
  if (shocks.size() < 2) {
    throw std::domain_error("brute_force_im_profile: need at least 2 shocks");
  }
  const std::uint64_t estimate = brute_force_cost(pg, p, shocks);
  if (estimate > budget.max_evals) throw BudgetExceeded(estimate, budget.max_evals);

  const std::size_t P = pg.n_paths();
  const std::size_t K = pg.n_dates();
  const std::size_t S = shocks.size();

  ImProfile prof;
  prof.dates = pg.dates();
  prof.n_paths = P;
  prof.per_path.resize(P * K);
  prof.expected_im.assign(K, 0.0);

  parallel_for(P, [&](std::size_t path) {
    std::vector<double> losses(S);
    for (std::size_t k = 0; k < K; ++k) {
      const double t = pg.date(k);
      const ZeroCurve base_curve = pg.curve_at(path, k);
      const double base = price_portfolio(base_curve, t, p);
      for (std::size_t q = 0; q < S; ++q) {
        losses[q] =
            base - price_portfolio(apply_shock(base_curve, shocks.shocks[q]), t, p);
      }
      const VarEs ve = var_es_from_losses(losses, method.confidence);
      const double stat = method.kind == ImKind::var ? ve.var : ve.es;
      prof.per_path[path * K + k] = stat > 0.0 ? stat : 0.0;
    }
  });

  for (std::size_t k = 0; k < K; ++k) {
    double acc = 0.0;
    for (std::size_t path = 0; path < P; ++path) acc += prof.per_path[path * K + k];
    prof.expected_im[k] = acc / static_cast<double>(P);
  }
  return prof;
}

OracleReport compare(const MethodProfile& a, const MethodProfile& b,
                     double gross) {
  if (a.dates != b.dates) {
    throw std::domain_error("compare: date grids differ");
  }
  if (a.mean_value.size() != a.dates.size() ||
      b.mean_value.size() != b.dates.size() ||
      a.expected_im.size() != a.dates.size() ||
      b.expected_im.size() != b.dates.size()) {
    throw std::domain_error("compare: profile sizes differ");
  }
  if (!(gross > 0.0)) {
    throw std::domain_error("compare: gross notional must be > 0");
  }

  OracleReport r;
  r.dates = a.dates;
  r.gross_notional = gross;
  r.label_a = a.label;
  r.label_b = b.label;
  r.seconds_a = a.seconds;
  r.seconds_b = b.seconds;
  const double to_bps = 1e4 / gross;

  r.value_err_bps.resize(r.dates.size());
  r.im_err_bps.resize(r.dates.size());
  for (std::size_t k = 0; k < r.dates.size(); ++k) {
    r.value_err_bps[k] = std::fabs(a.mean_value[k] - b.mean_value[k]) * to_bps;
    r.im_err_bps[k] = std::fabs(a.expected_im[k] - b.expected_im[k]) * to_bps;
    r.max_value_err_bps = std::max(r.max_value_err_bps, r.value_err_bps[k]);
    r.max_im_err_bps = std::max(r.max_im_err_bps, r.im_err_bps[k]);
  }
  r.mva_a_bps = -a.mva_raw * to_bps;
  r.mva_b_bps = -b.mva_raw * to_bps;
  r.mva_err_bps = std::fabs(r.mva_a_bps - r.mva_b_bps);
  return r;
}

}  // namespace mva
