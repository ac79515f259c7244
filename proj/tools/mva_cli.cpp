#include <CLI11.hpp>

#include <cstdio>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "mva/io.hpp"
#include "mva/oracle.hpp"
#include "mva/runner.hpp"

namespace {

using mva::RunConfig;
using mva::ShockSourceConfig;

struct Overrides {
  std::optional<std::string> config;
  std::optional<std::uint64_t> seed;  // master: portfolio recipe + simulation
  std::optional<std::size_t> paths;
  std::optional<std::size_t> basis_m;
  std::optional<std::string> shocks;  // PATH or synth:SEED:COUNT
  std::optional<std::string> im_method;
  std::optional<double> confidence;
  std::optional<std::string> out;
  std::optional<unsigned> threads;
  std::optional<std::string> kernel;
  std::optional<std::string> portfolio;
};

void add_common_options(CLI::App* cmd, Overrides& o) {
  cmd->add_option("--config", o.config, "Run configuration JSON file");
  cmd->add_option("--seed", o.seed,
                  "Master seed: overrides both the portfolio recipe seed and "
                  "the simulation seed");
  cmd->add_option("--paths", o.paths, "Monte Carlo path count");
  cmd->add_option("--basis-m", o.basis_m, "Basis granularity m (2m+1 functions)");
  cmd->add_option("--shocks", o.shocks,
                  "Shock source: CSV path or synth:SEED:COUNT");
  cmd->add_option("--im-method", o.im_method, "Margin statistic: var or es");
  cmd->add_option("--confidence", o.confidence, "Margin confidence in (0.5, 1)");
  cmd->add_option("--out", o.out, "Output directory");
  cmd->add_option("--threads", o.threads, "Worker threads (0 = hardware)");
  cmd->add_option("--kernel", o.kernel, "Kernel backend: auto, scalar, avx2, neon");
  cmd->add_option("--portfolio", o.portfolio, "Portfolio JSON file");
}

ShockSourceConfig parse_shock_flag(const std::string& s,
                                   const ShockSourceConfig& base) {
  ShockSourceConfig out = base;
  if (s.rfind("synth:", 0) == 0) {
    const std::size_t mid = s.find(':', 6);
    if (mid == std::string::npos || mid + 1 >= s.size()) {
      throw mva::io::ConfigError("--shocks: expected synth:SEED:COUNT");
    }
    try {
      out.kind = ShockSourceConfig::Kind::synth;
      out.seed = std::stoull(s.substr(6, mid - 6));
      out.count = std::stoull(s.substr(mid + 1));
    } catch (const std::exception&) {
      throw mva::io::ConfigError("--shocks: expected synth:SEED:COUNT");
    }
  } else {
    out.kind = ShockSourceConfig::Kind::file;
    out.path = s;
  }
  return out;
}

RunConfig build_config(const Overrides& o) {
  RunConfig cfg;
  if (o.config) cfg = RunConfig::from_json_file(*o.config);
  if (o.seed) {
    cfg.recipe.seed = *o.seed;
    cfg.sim_seed = *o.seed;
  }
  if (o.paths) cfg.n_paths = *o.paths;
  if (o.basis_m) cfg.basis_m = *o.basis_m;
  if (o.shocks) cfg.shocks = parse_shock_flag(*o.shocks, cfg.shocks);
  if (o.im_method) {
    if (*o.im_method == "var") {
      cfg.im.kind = mva::ImKind::var;
    } else if (*o.im_method == "es") {
      cfg.im.kind = mva::ImKind::es;
    } else {
      throw mva::io::ConfigError("--im-method: must be 'var' or 'es'");
    }
  }
  if (o.confidence) cfg.im.confidence = *o.confidence;
  if (o.out) cfg.out_dir = *o.out;
  if (o.threads) cfg.threads = *o.threads;
  if (o.kernel) cfg.kernel = *o.kernel;
  if (o.portfolio) cfg.portfolio_file = *o.portfolio;
  return cfg;
}

int run_main(const Overrides& o) {
  const RunConfig cfg = build_config(o);
  const mva::RunArtifacts arts = mva::run_pipeline(cfg);
  mva::write_run_outputs(cfg, arts);
  std::printf("wrote %s (trades=%zu shocks=%zu paths=%zu)\n",
              cfg.out_dir.c_str(), arts.portfolio.size(), arts.shocks.size(),
              arts.grid.n_paths);
  std::printf(
      "mva_bps=%s fva_bps=%s cva_bps=%s dva_bps=%s fca_bps=%s colva_bps=%s\n",
      mva::io::format_double(arts.xva.mva_bps).c_str(),
      mva::io::format_double(arts.xva.fva_bps).c_str(),
      mva::io::format_double(arts.xva.cva_bps).c_str(),
      mva::io::format_double(arts.xva.dva_bps).c_str(),
      mva::io::format_double(arts.xva.fca_bps).c_str(),
      mva::io::format_double(arts.xva.colva_bps).c_str());
  return 0;
}

int oracle_compare_main(const Overrides& o) {
  const RunConfig cfg = build_config(o);
  const mva::OracleReport report = mva::run_oracle_compare(cfg);
  std::filesystem::create_directories(cfg.out_dir);
  const std::filesystem::path dir(cfg.out_dir);
  mva::io::write_json((dir / "oracle_report.json").string(),
                      mva::io::oracle_report_to_json(report));
  mva::io::write_oracle_report_csv((dir / "oracle_report.csv").string(), report);
  std::printf("max_im_err_bps=%s max_value_err_bps=%s mva_err_bps=%s\n",
              mva::io::format_double(report.max_im_err_bps).c_str(),
              mva::io::format_double(report.max_value_err_bps).c_str(),
              mva::io::format_double(report.mva_err_bps).c_str());
  return 0;
}

int bench_main(const Overrides& o, const std::vector<std::size_t>& sizes) {
  const RunConfig cfg = build_config(o);
  const std::vector<mva::BenchRow> rows = mva::run_bench(cfg, sizes);
  std::filesystem::create_directories(cfg.out_dir);
  const std::string csv = mva::bench_csv(rows);
  mva::io::write_file(
      (std::filesystem::path(cfg.out_dir) / "bench.csv").string(), csv);
  std::fputs(csv.c_str(), stdout);

  double lo = 0.0, hi = 0.0;
  for (const mva::BenchRow& r : rows) {
    if (lo == 0.0 || r.lsac_im_seconds < lo) lo = r.lsac_im_seconds;
    if (r.lsac_im_seconds > hi) hi = r.lsac_im_seconds;
  }
  if (lo > 0.0 && hi / lo > 2.0) {
    std::printf("NOTE: compressed IM evaluation varied %sx across sizes "
                "(expected < 2x)\n",
                mva::io::format_double(hi / lo).c_str());
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Monte Carlo margin and valuation-adjustment engine"};
  app.require_subcommand(1);

  Overrides o;

  // gen-portfolio
  auto* gen_pf = app.add_subcommand("gen-portfolio", "Generate a synthetic swap book");
  mva::PortfolioRecipe recipe;
  std::string pf_out = "portfolio.json";
  gen_pf->add_option("--n", recipe.n, "Number of swaps");
  gen_pf->add_option("--p-payer", recipe.p_payer, "Payer probability");
  gen_pf->add_option("--strike-base", recipe.strike_base, "Strike base rate");
  gen_pf->add_option("--y", recipe.y, "Strike distribution shift");
  gen_pf->add_option("--seed", recipe.seed, "Recipe seed");
  gen_pf->add_option("--out", pf_out, "Output JSON path");

  // gen-shocks
  auto* gen_sh = app.add_subcommand("gen-shocks", "Generate or extract a shock set");
  std::string sh_spec = "synth:1:1294";
  std::string sh_history;
  std::size_t sh_horizon = 10;
  double sh_max_rel = 0.3;
  std::string sh_out = "shocks.csv";
  gen_sh->add_option("--shocks", sh_spec, "synth:SEED:COUNT");
  gen_sh->add_option("--history", sh_history, "Historical series CSV");
  gen_sh->add_option("--horizon", sh_horizon, "History move horizon in rows");
  gen_sh->add_option("--max-rel", sh_max_rel, "Synthetic max |relative shock|");
  gen_sh->add_option("--out", sh_out, "Output CSV path");

  // run / oracle-compare / bench
  auto* run_cmd = app.add_subcommand("run", "Full margin + xVA pipeline");
  add_common_options(run_cmd, o);
  auto* oc_cmd = app.add_subcommand("oracle-compare",
                                    "Compressed engine vs brute-force reference");
  add_common_options(oc_cmd, o);
  auto* bench_cmd = app.add_subcommand("bench", "Timing across portfolio sizes");
  add_common_options(bench_cmd, o);
  std::vector<std::size_t> sizes{50, 100, 1000, 10000};
  bench_cmd->add_option("--sizes", sizes, "Portfolio sizes to time");

  // state-space
  auto* ss_cmd = app.add_subcommand(
      "state-space", "Shock-augmentation coverage diagnostic (CSV)");
  mva::StateSpaceConfig ss;
  std::string ss_out = "state_space.csv";
  ss_cmd->add_option("--x0", ss.ou.x0, "Initial state");
  ss_cmd->add_option("--mu", ss.ou.mu, "Reversion level");
  ss_cmd->add_option("--eta", ss.ou.eta, "Reversion speed");
  ss_cmd->add_option("--ou-sigma", ss.ou.sigma, "Volatility");
  ss_cmd->add_option("--horizon", ss.horizon, "Horizon in years");
  ss_cmd->add_option("--dt", ss.dt, "Step in years");
  ss_cmd->add_option("--paths", ss.n_paths, "Path count");
  ss_cmd->add_option("--seed", ss.seed, "Simulation seed");
  ss_cmd->add_option("--shock-mag", ss.shock_mag, "Relative shock magnitude");
  ss_cmd->add_option("--out", ss_out, "Output CSV path");

  try {
    app.parse(argc, argv);

    if (gen_pf->parsed()) {
      mva::io::write_portfolio_json(pf_out, mva::generate_portfolio(recipe));
      std::printf("wrote %s (n=%zu)\n", pf_out.c_str(), recipe.n);
      return 0;
    }
    if (gen_sh->parsed()) {
      mva::ShockSourceConfig src;
      if (!sh_history.empty()) {
        src.kind = mva::ShockSourceConfig::Kind::history;
        src.path = sh_history;
        src.horizon = sh_horizon;
      } else {
        src = parse_shock_flag(sh_spec, src);
        if (src.kind != mva::ShockSourceConfig::Kind::synth) {
          throw mva::io::ConfigError("gen-shocks: --shocks must be synth:SEED:COUNT");
        }
        src.max_rel = sh_max_rel;
      }
      const mva::ShockSet shocks = mva::load_shocks(src);
      mva::io::write_shocks_csv(sh_out, shocks);
      std::printf("wrote %s (%zu shocks, %s)\n", sh_out.c_str(), shocks.size(),
                  shocks.provenance.c_str());
      return 0;
    }
    if (run_cmd->parsed()) return run_main(o);
    if (oc_cmd->parsed()) return oracle_compare_main(o);
    if (bench_cmd->parsed()) return bench_main(o, sizes);
    if (ss_cmd->parsed()) {
      mva::io::write_file(ss_out, mva::state_space_csv(ss));
      std::printf("wrote %s\n", ss_out.c_str());
      return 0;
    }
    return 0;
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  } catch (const mva::BudgetExceeded& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 3;
  } catch (const mva::io::ConfigError& e) {
    std::fprintf(stderr, "config error: %s\n", e.what());
    return 2;
  } catch (const std::domain_error& e) {
    std::fprintf(stderr, "config error: %s\n", e.what());
    return 2;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 1;
  }
}
