#pragma once

#include <stdexcept>
#include <string>

#include <json.hpp>

#include "mva/instruments.hpp"
#include "mva/lsac.hpp"
#include "mva/market.hpp"
#include "mva/oracle.hpp"
#include "mva/xva.hpp"

namespace mva::io {

// Malformed configuration or data files; the CLI maps this to exit code 2.
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Shortest round-trip decimal form of v, the one number format used in
// every CSV so outputs are byte-stable and parse back to the same double.
std::string format_double(double v);

// Whole-file helpers; writes are binary-mode with '\n' line endings and
// contain no timestamps or other run-varying content.
std::string read_file(const std::string& path);
void write_file(const std::string& path, const std::string& content);

// Canonical pillar column labels: tenor_0, tenor_0.5, ..., tenor_30.
std::string tenor_label(std::size_t j);
std::string shock_csv_header();

// Shock CSV: header row of pillar labels, one relative shock per row.
void write_shocks_csv(const std::string& path, const ShockSet& s);
ShockSet read_shocks_csv(const std::string& path);

// Historical series CSV: "date" column (ISO strings, kept verbatim)
// followed by the 18 pillar yields per row, oldest first.
CurveSeries read_history_csv(const std::string& path);

// Base curve CSV: header "tenor,zero_yield", 18 rows matching the
// canonical grid in order.
ZeroCurve read_curve_csv(const std::string& path);
void write_curve_csv(const std::string& path, const ZeroCurve& c);

// Portfolio JSON: array of {notional, fixed_rate, gearing, maturity,
// is_payer}; an optional "freq" per swap defaults to 2.
void write_portfolio_json(const std::string& path, const Portfolio& p);
Portfolio read_portfolio_json(const std::string& path);

nlohmann::json xva_to_json(const XvaResult& r);
nlohmann::json regressions_to_json(const RegressionSet& rs);
nlohmann::json oracle_report_to_json(const OracleReport& r);

void write_json(const std::string& path, const nlohmann::json& j);

void write_im_profile_csv(const std::string& path, const ImProfile& prof);
void write_exposure_csv(const std::string& path, const ExposureProfiles& ep);
void write_oracle_report_csv(const std::string& path, const OracleReport& r);

}  // namespace mva::io
