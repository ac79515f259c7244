#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

#include "mva/lsac.hpp"

namespace mva {

// Guard rail for the full-revaluation reference: the cost estimate
// paths * dates * shocks * max(trades, 1) must not exceed max_evals.
struct OracleBudget {
  std::uint64_t max_evals = 1'000'000'000;
};

class BudgetExceeded : public std::runtime_error {
 public:
  BudgetExceeded(std::uint64_t estimate, std::uint64_t budget);
  std::uint64_t estimate() const { return estimate_; }

 private:
  std::uint64_t estimate_;
};

std::uint64_t brute_force_cost(const PathGrid& pg, const Portfolio& p,
                               const ShockSet& shocks);

// Reference initial-margin profile with no compression anywhere: every
// (path, date, shock) revalues the whole book trade by trade. Shares the
// shock application and VAR/ES code paths with the compressed engine, so
// any disagreement is attributable to the regression alone. Throws
// BudgetExceeded (with the estimate in the message) before doing any work
// if the job is too large.
ImProfile brute_force_im_profile(const PathGrid& pg, const Portfolio& p,
                                 const ShockSet& shocks,
                                 const ImMethod& method,
                                 const OracleBudget& budget = {});

// One engine's per-date outputs, whichever way they were produced.
struct MethodProfile {
  std::string label;
  std::vector<double> dates;
  std::vector<double> mean_value;   // E[V(t_k)] at unshocked states
  std::vector<double> expected_im;  // E[I(t_k)]
  double mva_raw = 0.0;
  double seconds = 0.0;  // wall time of the IM stage, caller-measured
};

struct OracleReport {
  std::vector<double> dates;
  std::vector<double> value_err_bps;  // |mean value diff| per date
  std::vector<double> im_err_bps;     // |expected IM diff| per date
  double max_value_err_bps = 0.0;
  double max_im_err_bps = 0.0;
  double mva_a_bps = 0.0;  // cost convention
  double mva_b_bps = 0.0;
  double mva_err_bps = 0.0;
  double gross_notional = 0.0;
  std::string label_a, label_b;
  double seconds_a = 0.0, seconds_b = 0.0;
};

// Datewise differences in basis points of gross notional. Grids must
// match; gross must be > 0.
OracleReport compare(const MethodProfile& a, const MethodProfile& b,
                     double gross);

}  // namespace mva
