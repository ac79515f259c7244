#include "mva/io.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>
#include <vector>

namespace mva::io {
namespace {

std::vector<std::string> split(const std::string& line, char sep) {
  std::vector<std::string> out;
  std::size_t start = 0;
  while (true) {
    const std::size_t pos = line.find(sep, start);
    if (pos == std::string::npos) {
      out.push_back(line.substr(start));
      return out;
    }
    out.push_back(line.substr(start, pos - start));
    start = pos + 1;
  }
}

double parse_double(const std::string& s, const std::string& context) {
  double v = 0.0;
  const char* b = s.data();
  const char* e = b + s.size();
  auto [p, ec] = std::from_chars(b, e, v);
  if (ec != std::errc() || p != e || !std::isfinite(v)) {
    throw ConfigError(context + ": bad number '" + s + "'");
  }
  return v;
}

// Non-empty lines of a file, tolerating a trailing newline and CRLF.
std::vector<std::string> read_lines(const std::string& path) {
  std::istringstream in(read_file(path));
  std::vector<std::string> lines;
  std::string line;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (!line.empty()) lines.push_back(line);
  }
  return lines;
}

}  // namespace

std::string format_double(double v) {
  char buf[32];
  auto [p, ec] = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, p);
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError("cannot open file: " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  if (!in.good() && !in.eof()) throw ConfigError("cannot read file: " + path);
  return ss.str();
}

void write_file(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw std::runtime_error("cannot open file for writing: " + path);
  out.write(content.data(), static_cast<std::streamsize>(content.size()));
  if (!out.good()) throw std::runtime_error("cannot write file: " + path);
}

std::string tenor_label(std::size_t j) {
  return "tenor_" + format_double(kTenors.at(j));
}

std::string shock_csv_header() {
  std::string h;
  for (std::size_t j = 0; j < kTenorCount; ++j) {
    if (j) h += ',';
    h += tenor_label(j);
  }
  return h;
}

void write_shocks_csv(const std::string& path, const ShockSet& s) {
  std::string body = shock_csv_header() + "\n";
  for (const auto& sh : s.shocks) {
    for (std::size_t j = 0; j < kTenorCount; ++j) {
      if (j) body += ',';
      body += format_double(sh.rel[j]);
    }
    body += '\n';
  }
  write_file(path, body);
}

ShockSet read_shocks_csv(const std::string& path) {
  const auto lines = read_lines(path);
  if (lines.empty() || lines[0] != shock_csv_header()) {
    throw ConfigError(path + ": expected shock CSV header '" +
                      shock_csv_header() + "'");
  }
  ShockSet out;
  out.provenance = "file:" + path;
  for (std::size_t i = 1; i < lines.size(); ++i) {
    const auto cells = split(lines[i], ',');
    if (cells.size() != kTenorCount) {
      throw ConfigError(path + ": row " + std::to_string(i) +
                        " must have 18 columns");
    }
    RelativeShock sh;
    for (std::size_t j = 0; j < kTenorCount; ++j) {
      sh.rel[j] = parse_double(cells[j], path);
    }
    try {
      validate_shock(sh);
    } catch (const std::domain_error& e) {
      throw ConfigError(path + ": row " + std::to_string(i) + ": " + e.what());
    }
    out.shocks.push_back(sh);
  }
  if (out.empty()) throw ConfigError(path + ": no shock rows");
  return out;
}

CurveSeries read_history_csv(const std::string& path) {
  const auto lines = read_lines(path);
  const std::string expected = "date," + shock_csv_header();
  if (lines.empty() || lines[0] != expected) {
    throw ConfigError(path + ": expected history header '" + expected + "'");
  }
  CurveSeries out;
  for (std::size_t i = 1; i < lines.size(); ++i) {
    const auto cells = split(lines[i], ',');
    if (cells.size() != kTenorCount + 1) {
      throw ConfigError(path + ": row " + std::to_string(i) +
                        " must have a date plus 18 yields");
    }
    out.dates.push_back(cells[0]);
    std::array<double, kTenorCount> row;
    for (std::size_t j = 0; j < kTenorCount; ++j) {
      row[j] = parse_double(cells[j + 1], path);
    }
    out.rows.push_back(row);
  }
  if (out.rows.empty()) throw ConfigError(path + ": no history rows");
  return out;
}

ZeroCurve read_curve_csv(const std::string& path) {
  const auto lines = read_lines(path);
  if (lines.empty() || lines[0] != "tenor,zero_yield") {
    throw ConfigError(path + ": expected header 'tenor,zero_yield'");
  }
  if (lines.size() != kTenorCount + 1) {
    throw ConfigError(path + ": expected exactly 18 pillar rows");
  }
  ZeroCurve c;
  for (std::size_t j = 0; j < kTenorCount; ++j) {
    const auto cells = split(lines[j + 1], ',');
    if (cells.size() != 2) {
      throw ConfigError(path + ": row " + std::to_string(j + 1) + " malformed");
    }
    const double tenor = parse_double(cells[0], path);
    if (std::fabs(tenor - kTenors[j]) > 1e-12) {
      throw ConfigError(path + ": pillar " + std::to_string(j + 1) +
                        " must be " + format_double(kTenors[j]));
    }
    c.zeros[j] = parse_double(cells[1], path);
  }
  return c;
}

void write_curve_csv(const std::string& path, const ZeroCurve& c) {
  std::string body = "tenor,zero_yield\n";
  for (std::size_t j = 0; j < kTenorCount; ++j) {
    body += format_double(kTenors[j]);
    body += ',';
    body += format_double(c.zeros[j]);
    body += '\n';
  }
  write_file(path, body);
}

void write_portfolio_json(const std::string& path, const Portfolio& p) {
  nlohmann::json arr = nlohmann::json::array();
  for (const Swap& s : p) {
    arr.push_back({{"notional", s.notional},
                   {"fixed_rate", s.fixed_rate},
                   {"gearing", s.gearing},
                   {"maturity", s.maturity},
                   {"is_payer", s.is_payer}});
  }
  write_json(path, arr);
}

Portfolio read_portfolio_json(const std::string& path) {
  nlohmann::json arr;
  try {
    arr = nlohmann::json::parse(read_file(path));
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError(path + ": " + e.what());
  }
  if (!arr.is_array()) throw ConfigError(path + ": expected a JSON array of swaps");
  Portfolio out;
  for (const auto& item : arr) {
    try {
      Swap s;
      s.notional = item.at("notional").get<double>();
      s.fixed_rate = item.at("fixed_rate").get<double>();
      s.gearing = item.at("gearing").get<double>();
      s.maturity = item.at("maturity").get<double>();
      s.is_payer = item.at("is_payer").get<bool>();
      s.freq = item.value("freq", 2);
      validate_swap(s);
      out.push_back(s);
    } catch (const nlohmann::json::exception& e) {
      throw ConfigError(path + ": " + e.what());
    } catch (const std::domain_error& e) {
      throw ConfigError(path + ": " + e.what());
    }
  }
  return out;
}

nlohmann::json xva_to_json(const XvaResult& r) {
  return {
      {"cva_bps", r.cva_bps},
      {"dva_bps", r.dva_bps},
      {"fca_bps", r.fca_bps},
      {"fva_bps", r.fva_bps},
      {"colva_bps", r.colva_bps},
      {"mva_bps", r.mva_bps},
      {"kva_bps", r.kva_bps},
      {"gross_notional", r.gross_notional},
      {"values",
       {{"cva", r.cva},
        {"dva", r.dva},
        {"fca", r.fca},
        {"fva", r.fva},
        {"colva", r.colva},
        {"mva", r.mva}}},
      {"raw",
       {{"cva", r.cva_raw},
        {"dva", r.dva_raw},
        {"fca", r.fca_raw},
        {"fva", r.fva_raw},
        {"colva", r.colva_raw},
        {"mva", r.mva_raw}}},
  };
}

nlohmann::json regressions_to_json(const RegressionSet& rs) {
  nlohmann::json fits = nlohmann::json::array();
  for (const DateFit& f : rs.fits) {
    fits.push_back({{"coeffs", f.coeffs},
                    {"rank", f.rank},
                    {"rank_deficient", f.rank_deficient},
                    {"mean_abs_err_bps", f.mean_abs_err_bps},
                    {"max_abs_err_bps", f.max_abs_err_bps}});
  }
  return {{"basis",
           {{"end_dates", rs.spec.end_dates}, {"strikes", rs.spec.strikes}}},
          {"dates", rs.dates},
          {"gross_notional", rs.gross_notional},
          {"fits", fits}};
}

nlohmann::json oracle_report_to_json(const OracleReport& r) {
  return {{"label_a", r.label_a},
          {"label_b", r.label_b},
          {"gross_notional", r.gross_notional},
          {"dates", r.dates},
          {"value_err_bps", r.value_err_bps},
          {"im_err_bps", r.im_err_bps},
          {"max_value_err_bps", r.max_value_err_bps},
          {"max_im_err_bps", r.max_im_err_bps},
          {"mva_a_bps", r.mva_a_bps},
          {"mva_b_bps", r.mva_b_bps},
          {"mva_err_bps", r.mva_err_bps},
          {"seconds_a", r.seconds_a},
          {"seconds_b", r.seconds_b}};
}

void write_json(const std::string& path, const nlohmann::json& j) {
  write_file(path, j.dump(2) + "\n");
}

void write_im_profile_csv(const std::string& path, const ImProfile& prof) {
  std::string body = "date,expected_im\n";
  for (std::size_t k = 0; k < prof.dates.size(); ++k) {
    body += format_double(prof.dates[k]);
    body += ',';
    body += format_double(prof.expected_im[k]);
    body += '\n';
  }
  write_file(path, body);
}

void write_exposure_csv(const std::string& path, const ExposureProfiles& ep) {
  std::string body = "date,epe,ene\n";
  for (std::size_t k = 0; k < ep.dates.size(); ++k) {
    body += format_double(ep.dates[k]);
    body += ',';
    body += format_double(ep.epe[k]);
    body += ',';
    body += format_double(ep.ene[k]);
    body += '\n';
  }
  write_file(path, body);
}

void write_oracle_report_csv(const std::string& path, const OracleReport& r) {
  std::string body = "date,value_err_bps,im_err_bps\n";
  for (std::size_t k = 0; k < r.dates.size(); ++k) {
    body += format_double(r.dates[k]);
    body += ',';
    body += format_double(r.value_err_bps[k]);
    body += ',';
    body += format_double(r.im_err_bps[k]);
    body += '\n';
  }
  write_file(path, body);
}

}  // namespace mva::io
