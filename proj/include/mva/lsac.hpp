#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "mva/instruments.hpp"
#include "mva/simulation.hpp"

namespace mva {

// Regression basis: a constant plus, for m end dates i * horizon / m, a
// unit-notional payer swap struck at the time-0 par rate and a unit
// annuity on the same schedule (2m + 1 functions in total). Instruments
// follow the same semiannual schedule conventions as the traded book, so
// matured basis columns are exactly 0 and at the horizon only the constant
// survives.
struct BasisSpec {
  std::vector<double> end_dates;
  std::vector<double> strikes;

  std::size_t size() const { return 1 + 2 * end_dates.size(); }

  // m in [1, 60] so every basis instrument has at least one coupon.
  static BasisSpec make(std::size_t m, const ZeroCurve& base,
                        double horizon = 30.0);
};

// Writes the 2m + 1 basis values on curve c at valuation time t into out
// (out.size() == spec.size()). Layout: [constant, swaps..., annuities...].
void basis_values(const ZeroCurve& c, double t, const BasisSpec& spec,
                  std::span<double> out);

// Shock assignment rule: path p is paired with shocks[p % size] at every
// date. With at least as many shocks as paths every shock in the set is
// some path's shock; with fewer, assignment wraps around.
inline std::size_t assigned_shock_index(const ShockSet& s, std::size_t path) {
  return path % s.size();
}

// The regression state actually seen by path p at date k: the model curve
// moved by the path's assigned shock. This is the augmentation that puts
// the margin-relevant perturbed states inside the regression's training
// domain.
ZeroCurve shocked_state(const PathGrid& pg, const ShockSet& s, std::size_t p,
                        std::size_t k);

struct DateFit {
  std::vector<double> coeffs;
  int rank = 0;
  bool rank_deficient = false;
  double mean_abs_err_bps = 0.0;  // in-sample vs full revaluation
  double max_abs_err_bps = 0.0;
};

struct RegressionSet {
  BasisSpec spec;
  std::vector<double> dates;
  std::vector<DateFit> fits;  // one per date, fitted independently
  double gross_notional = 0.0;
};

// Least-squares fit of full-revaluation portfolio values against the basis,
// per date, over the shocked states of every path. Both features and
// targets see the shock. Columns are scaled to unit standard deviation
// (zero-variance columns are left alone) and solved by a rank-revealing
// complete orthogonal decomposition with threshold 1e-10, which yields the
// minimum-norm solution on degenerate designs; fits flag rank deficiency
// instead of failing. Requires n_paths >= spec.size() and a non-empty
// shock set.
RegressionSet fit_regressions(const PathGrid& pg, const Portfolio& portfolio,
                              const ShockSet& shocks, const BasisSpec& spec);

// Compressed portfolio value at date k on an arbitrary curve.
double eval_portfolio(const RegressionSet& rs, std::size_t k,
                      const ZeroCurve& c);

// Order statistic at ceil(q * N) (1-based) of the values sorted ascending;
// no interpolation. q in (0, 1].
double order_stat_quantile(std::span<const double> values, double q);

struct VarEs {
  double var = 0.0;
  double es = 0.0;
};

// One-sided VAR and expected shortfall of a loss sample: VAR is the
// ceil(confidence * N) ascending order statistic, ES the mean of that and
// all larger losses. confidence in (0.5, 1); at least 2 losses.
VarEs var_es_from_losses(std::span<const double> losses, double confidence);

enum class ImKind { var, es };

struct ImMethod {
  ImKind kind = ImKind::var;
  double confidence = 0.99;
};

// Initial margin posted by path p at date k: the VAR (or ES) of the losses
//   loss[q] = value(base curve) - value(base curve under shocks[q])
// over the whole shock set, evaluated through the compressed portfolio,
// floored at 0. The base curve is the path's unshocked model curve.
double compute_im(const RegressionSet& rs, const PathGrid& pg,
                  const ShockSet& shocks, const ImMethod& method,
                  std::size_t p, std::size_t k);

struct ImProfile {
  std::vector<double> dates;
  std::vector<double> expected_im;  // E[I(t_k)], pathwise mean
  std::vector<double> per_path;     // [p * K + k]
  std::size_t n_paths = 0;

  double im(std::size_t p, std::size_t k) const {
    return per_path[p * dates.size() + k];
  }
};

ImProfile im_profile(const RegressionSet& rs, const PathGrid& pg,
                     const ShockSet& shocks, const ImMethod& method);

// Per-date pathwise mean of the compressed portfolio value at the
// unshocked model states; the regression-side counterpart of a full
// revaluation's mean exposure.
std::vector<double> mean_value_profile(const RegressionSet& rs,
                                       const PathGrid& pg);

}  // namespace mva
