#include "mva/runner.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <filesystem>
#include <functional>
#include <stdexcept>

#include "mva/kernels.hpp"
#include "mva/parallel.hpp"

namespace mva {
namespace {

using nlohmann::json;

void check_keys(const json& j, std::initializer_list<const char*> allowed,
                const std::string& ctx) {
  if (!j.is_object()) throw io::ConfigError(ctx + ": expected an object");
  for (const auto& item : j.items()) {
    bool known = false;
    for (const char* k : allowed) {
      if (item.key() == k) {
        known = true;
        break;
      }
    }
    if (!known) throw io::ConfigError(ctx + ": unknown key '" + item.key() + "'");
  }
}

template <typename T>
T get_or(const json& j, const char* key, T fallback, const std::string& ctx) {
  if (!j.contains(key)) return fallback;
  try {
    return j.at(key).get<T>();
  } catch (const json::exception& e) {
    throw io::ConfigError(ctx + "." + key + ": " + e.what());
  }
}

PortfolioRecipe parse_recipe(const json& j) {
  check_keys(j, {"n", "p_payer", "strike_base", "y", "seed"}, "portfolio.recipe");
  PortfolioRecipe r;
  r.n = get_or<std::size_t>(j, "n", r.n, "portfolio.recipe");
  r.p_payer = get_or<double>(j, "p_payer", r.p_payer, "portfolio.recipe");
  r.strike_base = get_or<double>(j, "strike_base", r.strike_base, "portfolio.recipe");
  r.y = get_or<double>(j, "y", r.y, "portfolio.recipe");
  r.seed = get_or<std::uint64_t>(j, "seed", r.seed, "portfolio.recipe");
  return r;
}

ShockSourceConfig parse_shocks(const json& j) {
  check_keys(j, {"file", "synth", "history"}, "shocks");
  if (j.size() != 1) {
    throw io::ConfigError("shocks: exactly one of file/synth/history");
  }
  ShockSourceConfig s;
  if (j.contains("file")) {
    s.kind = ShockSourceConfig::Kind::file;
    s.path = j.at("file").get<std::string>();
  } else if (j.contains("history")) {
    const json& h = j.at("history");
    check_keys(h, {"file", "horizon"}, "shocks.history");
    s.kind = ShockSourceConfig::Kind::history;
    s.path = h.at("file").get<std::string>();
    s.horizon = get_or<std::size_t>(h, "horizon", s.horizon, "shocks.history");
  } else {
    const json& sy = j.at("synth");
    check_keys(sy, {"seed", "count", "max_rel"}, "shocks.synth");
    s.kind = ShockSourceConfig::Kind::synth;
    s.seed = get_or<std::uint64_t>(sy, "seed", s.seed, "shocks.synth");
    s.count = get_or<std::size_t>(sy, "count", s.count, "shocks.synth");
    s.max_rel = get_or<double>(sy, "max_rel", s.max_rel, "shocks.synth");
  }
  return s;
}

}  // namespace

RunConfig RunConfig::from_json(const json& j) {
  check_keys(j,
             {"portfolio", "shocks", "model", "grid", "basis_m", "im", "xva",
              "oracle_budget", "threads", "out_dir", "kernel"},
             "config");
  RunConfig cfg;

  if (j.contains("portfolio")) {
    const json& p = j.at("portfolio");
    check_keys(p, {"file", "recipe"}, "portfolio");
    if (p.size() != 1) {
      throw io::ConfigError("portfolio: exactly one of file/recipe");
    }
    if (p.contains("file")) {
      cfg.portfolio_file = p.at("file").get<std::string>();
    } else {
      cfg.recipe = parse_recipe(p.at("recipe"));
    }
  }

  if (j.contains("shocks")) cfg.shocks = parse_shocks(j.at("shocks"));

  if (j.contains("model")) {
    const json& m = j.at("model");
    check_keys(m, {"mean_reversion", "sigma", "flat_rate", "curve_file"}, "model");
    cfg.model.mean_reversion =
        get_or<double>(m, "mean_reversion", cfg.model.mean_reversion, "model");
    cfg.model.sigma = get_or<double>(m, "sigma", cfg.model.sigma, "model");
    if (m.contains("flat_rate") && m.contains("curve_file")) {
      throw io::ConfigError("model: flat_rate and curve_file are exclusive");
    }
    if (m.contains("curve_file")) {
      cfg.model.base_curve = io::read_curve_csv(m.at("curve_file").get<std::string>());
    } else if (m.contains("flat_rate")) {
      cfg.model.base_curve = ZeroCurve::flat(m.at("flat_rate").get<double>());
    }
  }

  if (j.contains("grid")) {
    const json& g = j.at("grid");
    check_keys(g, {"horizon", "n_paths", "seed"}, "grid");
    cfg.horizon = get_or<double>(g, "horizon", cfg.horizon, "grid");
    cfg.n_paths = get_or<std::size_t>(g, "n_paths", cfg.n_paths, "grid");
    cfg.sim_seed = get_or<std::uint64_t>(g, "seed", cfg.sim_seed, "grid");
  }

  cfg.basis_m = get_or<std::size_t>(j, "basis_m", cfg.basis_m, "config");

  if (j.contains("im")) {
    const json& im = j.at("im");
    check_keys(im, {"method", "confidence"}, "im");
    const std::string method = get_or<std::string>(im, "method", "var", "im");
    if (method == "var") {
      cfg.im.kind = ImKind::var;
    } else if (method == "es") {
      cfg.im.kind = ImKind::es;
    } else {
      throw io::ConfigError("im.method: must be 'var' or 'es'");
    }
    cfg.im.confidence = get_or<double>(im, "confidence", cfg.im.confidence, "im");
  }

  if (j.contains("xva")) {
    const json& x = j.at("xva");
    check_keys(x,
               {"lambda_b", "lambda_c", "recovery_b", "recovery_c", "im_spread",
                "colva_spread", "variation_margin"},
               "xva");
    cfg.xva.lambda_b = get_or<double>(x, "lambda_b", cfg.xva.lambda_b, "xva");
    cfg.xva.lambda_c = get_or<double>(x, "lambda_c", cfg.xva.lambda_c, "xva");
    cfg.xva.recovery_b = get_or<double>(x, "recovery_b", cfg.xva.recovery_b, "xva");
    cfg.xva.recovery_c = get_or<double>(x, "recovery_c", cfg.xva.recovery_c, "xva");
    cfg.xva.im_spread = get_or<double>(x, "im_spread", cfg.xva.im_spread, "xva");
    cfg.xva.colva_spread =
        get_or<double>(x, "colva_spread", cfg.xva.colva_spread, "xva");
    cfg.xva.variation_margin = get_or<std::vector<double>>(
        x, "variation_margin", cfg.xva.variation_margin, "xva");
  }

  cfg.oracle_budget =
      get_or<std::uint64_t>(j, "oracle_budget", cfg.oracle_budget, "config");
  cfg.threads = get_or<unsigned>(j, "threads", cfg.threads, "config");
  cfg.out_dir = get_or<std::string>(j, "out_dir", cfg.out_dir, "config");
  cfg.kernel = get_or<std::string>(j, "kernel", cfg.kernel, "config");
  return cfg;
}

RunConfig RunConfig::from_json_file(const std::string& path) {
  json j;
  try {
    j = json::parse(io::read_file(path));
  } catch (const json::exception& e) {
    throw io::ConfigError(path + ": " + e.what());
  }
  return from_json(j);
}

ShockSet load_shocks(const ShockSourceConfig& cfg) {
  switch (cfg.kind) {
    case ShockSourceConfig::Kind::file:
      return io::read_shocks_csv(cfg.path);
    case ShockSourceConfig::Kind::history:
      return shocks_from_history(io::read_history_csv(cfg.path), cfg.horizon);
    case ShockSourceConfig::Kind::synth:
      return synth_shock_set(cfg.seed, cfg.count, cfg.max_rel);
  }
  throw io::ConfigError("shocks: bad source");
}

Portfolio load_portfolio(const RunConfig& cfg) {
  if (cfg.portfolio_file) {
    Portfolio p = io::read_portfolio_json(*cfg.portfolio_file);
    validate_portfolio(p);
    return p;
  }
  return generate_portfolio(cfg.recipe);
}

namespace {

void apply_execution_config(const RunConfig& cfg) {
  set_max_threads(cfg.threads);
  if (cfg.kernel == "auto") {
    kernels::select_auto();
  } else if (!kernels::select(kernels::backend_from_name(cfg.kernel))) {
    throw io::ConfigError("kernel backend unavailable: " + cfg.kernel);
  }
}

SimGrid make_grid(const RunConfig& cfg) {
  SimGrid g;
  g.dates = SimGrid::semiannual(cfg.horizon);
  g.n_paths = cfg.n_paths;
  g.seed = cfg.sim_seed;
  return g;
}

}  // namespace

RunArtifacts run_pipeline(const RunConfig& cfg) {
  apply_execution_config(cfg);

  RunArtifacts arts;
  arts.portfolio = load_portfolio(cfg);
  arts.shocks = load_shocks(cfg.shocks);
  arts.model = cfg.model;
  arts.grid = make_grid(cfg);

  const PathGrid pg = simulate(arts.model, arts.grid);
  const BasisSpec basis =
      BasisSpec::make(cfg.basis_m, arts.model.base_curve, cfg.horizon);
  arts.regressions = fit_regressions(pg, arts.portfolio, arts.shocks, basis);
  arts.im = im_profile(arts.regressions, pg, arts.shocks, cfg.im);
  arts.exposures = exposure_profiles(pg, arts.portfolio);
  arts.xva = make_xva_result(arts.im, arts.exposures, cfg.xva,
                             arts.model.base_curve,
                             gross_notional(arts.portfolio));
  return arts;
}

nlohmann::json run_metadata(const RunConfig& cfg, const RunArtifacts& arts) {
  json portfolio;
  if (cfg.portfolio_file) {
    portfolio = {{"file", *cfg.portfolio_file}, {"trades", arts.portfolio.size()}};
  } else {
    portfolio = {{"recipe",
                  {{"n", cfg.recipe.n},
                   {"p_payer", cfg.recipe.p_payer},
                   {"strike_base", cfg.recipe.strike_base},
                   {"y", cfg.recipe.y},
                   {"seed", cfg.recipe.seed}}},
                 {"trades", arts.portfolio.size()}};
  }
  std::size_t deficient = 0;
  for (const DateFit& f : arts.regressions.fits) {
    if (f.rank_deficient) ++deficient;
  }
  return {
      {"portfolio", portfolio},
      {"shocks", {{"provenance", arts.shocks.provenance}, {"count", arts.shocks.size()}}},
      {"model",
       {{"mean_reversion", arts.model.mean_reversion},
        {"sigma", arts.model.sigma},
        {"base_curve", arts.model.base_curve.zeros}}},
      {"basis_m", cfg.basis_m},
      {"im",
       {{"method", cfg.im.kind == ImKind::var ? "var" : "es"},
        {"confidence", cfg.im.confidence}}},
      {"xva",
       {{"lambda_b", cfg.xva.lambda_b},
        {"lambda_c", cfg.xva.lambda_c},
        {"recovery_b", cfg.xva.recovery_b},
        {"recovery_c", cfg.xva.recovery_c},
        {"im_spread", cfg.xva.im_spread},
        {"colva_spread", cfg.xva.colva_spread}}},
      {"kernel", kernels::name(kernels::active_backend())},
      {"rank_deficient_dates", deficient},
  };
}

void write_run_outputs(const RunConfig& cfg, const RunArtifacts& arts) {
  std::filesystem::create_directories(cfg.out_dir);
  const std::filesystem::path dir(cfg.out_dir);

  json xva = io::xva_to_json(arts.xva);
  xva["params"] = run_metadata(cfg, arts);
  xva["grid"] = {{"horizon", cfg.horizon},
                 {"n_paths", arts.grid.n_paths},
                 {"seed", arts.grid.seed},
                 {"dates", arts.grid.dates.size()}};
  io::write_json((dir / "xva.json").string(), xva);
  io::write_im_profile_csv((dir / "im_profile.csv").string(), arts.im);
  io::write_exposure_csv((dir / "exposure.csv").string(), arts.exposures);
  io::write_json((dir / "regressions.json").string(),
                 io::regressions_to_json(arts.regressions));
}

namespace {

double time_once(const std::function<void()>& fn) {
  const auto t0 = std::chrono::steady_clock::now();
  fn();
  const auto t1 = std::chrono::steady_clock::now();
  return std::chrono::duration<double>(t1 - t0).count();
}

// Median of repetitions accumulated until 0.3 s of total work (at most 32).
double measure(const std::function<void()>& fn, bool warmup) {
  if (warmup) fn();
  std::vector<double> reps;
  double total = 0.0;
  do {
    const double t = time_once(fn);
    reps.push_back(t);
    total += t;
  } while (total < 0.3 && reps.size() < 32);
  std::sort(reps.begin(), reps.end());
  return reps[reps.size() / 2];
}

MethodProfile lsac_profile(const RegressionSet& rs, const PathGrid& pg,
                           const ShockSet& shocks, const ImMethod& method,
                           const XvaParams& xp, const ZeroCurve& base) {
  MethodProfile prof;
  prof.label = "lsac";
  prof.dates = pg.dates();
  prof.mean_value = mean_value_profile(rs, pg);
  const auto t0 = std::chrono::steady_clock::now();
  const ImProfile im = im_profile(rs, pg, shocks, method);
  prof.seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - t0)
          .count();
  prof.expected_im = im.expected_im;
  prof.mva_raw = compute_mva(im, xp, base);
  return prof;
}

MethodProfile brute_profile(const PathGrid& pg, const Portfolio& pf,
                            const ShockSet& shocks, const ImMethod& method,
                            const XvaParams& xp, const ZeroCurve& base,
                            const OracleBudget& budget) {
  MethodProfile prof;
  prof.label = "brute-force";
  prof.dates = pg.dates();
  prof.mean_value = exposure_profiles(pg, pf).mean_value;
  const auto t0 = std::chrono::steady_clock::now();
  const ImProfile im = brute_force_im_profile(pg, pf, shocks, method, budget);
  prof.seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - t0)
          .count();
  prof.expected_im = im.expected_im;
  prof.mva_raw = compute_mva(im, xp, base);
  return prof;
}

}  // namespace

OracleReport run_oracle_compare(const RunConfig& cfg) {
  apply_execution_config(cfg);
  const Portfolio pf = load_portfolio(cfg);
  const ShockSet shocks = load_shocks(cfg.shocks);
  const SimGrid grid = make_grid(cfg);
  const PathGrid pg = simulate(cfg.model, grid);
  const BasisSpec basis =
      BasisSpec::make(cfg.basis_m, cfg.model.base_curve, cfg.horizon);
  const RegressionSet rs = fit_regressions(pg, pf, shocks, basis);

  const MethodProfile a =
      lsac_profile(rs, pg, shocks, cfg.im, cfg.xva, cfg.model.base_curve);
  const MethodProfile b =
      brute_profile(pg, pf, shocks, cfg.im, cfg.xva, cfg.model.base_curve,
                    OracleBudget{cfg.oracle_budget});
  return compare(a, b, gross_notional(pf));
}

std::vector<BenchRow> run_bench(const RunConfig& cfg,
                                const std::vector<std::size_t>& sizes) {
  if (sizes.empty()) throw io::ConfigError("bench: no sizes given");
  apply_execution_config(cfg);

  // Every 10th semiannual date keeps the brute-force leg affordable while
  // spanning the whole horizon.
  const std::vector<double> all = SimGrid::semiannual(cfg.horizon);
  SimGrid slice;
  for (std::size_t k = 0; k < all.size(); k += 10) slice.dates.push_back(all[k]);
  slice.n_paths = cfg.n_paths;
  slice.seed = cfg.sim_seed;

  const ShockSet shocks = load_shocks(cfg.shocks);
  const PathGrid pg = simulate(cfg.model, slice);
  const BasisSpec basis =
      BasisSpec::make(cfg.basis_m, cfg.model.base_curve, cfg.horizon);

  std::vector<BenchRow> rows;
  for (std::size_t n : sizes) {
    PortfolioRecipe recipe = cfg.recipe;
    recipe.n = n;
    const Portfolio pf = generate_portfolio(recipe);

    BenchRow row;
    row.n = n;
    row.slice_paths = slice.n_paths;
    row.slice_dates = slice.dates.size();
    row.shocks = shocks.size();

    RegressionSet rs;
    row.fit_seconds =
        time_once([&] { rs = fit_regressions(pg, pf, shocks, basis); });
    row.lsac_im_seconds =
        measure([&] { im_profile(rs, pg, shocks, cfg.im); }, true);

    const std::uint64_t cost = brute_force_cost(pg, pf, shocks);
    if (cost > cfg.oracle_budget) {
      row.brute_skipped = true;
    } else {
      row.brute_im_seconds = measure(
          [&] {
            brute_force_im_profile(pg, pf, shocks, cfg.im,
                                   OracleBudget{cfg.oracle_budget});
          },
          false);
      row.speedup = row.brute_im_seconds / row.lsac_im_seconds;
    }
    rows.push_back(row);
  }
  return rows;
}

std::string bench_csv(const std::vector<BenchRow>& rows) {
  std::string body =
      "n,slice_paths,slice_dates,shocks,fit_seconds,lsac_im_seconds,"
      "brute_im_seconds,brute_skipped,speedup\n";
  for (const BenchRow& r : rows) {
    body += std::to_string(r.n) + ',' + std::to_string(r.slice_paths) + ',' +
            std::to_string(r.slice_dates) + ',' + std::to_string(r.shocks) +
            ',' + io::format_double(r.fit_seconds) + ',' +
            io::format_double(r.lsac_im_seconds) + ',' +
            io::format_double(r.brute_im_seconds) + ',' +
            (r.brute_skipped ? "1" : "0") + ',' +
            io::format_double(r.speedup) + '\n';
  }
  return body;
}

std::string state_space_csv(const StateSpaceConfig& cfg) {
  if (!(cfg.dt > 0.0 && cfg.horizon > 0.0)) {
    throw io::ConfigError("state-space: horizon and dt must be > 0");
  }
  if (!(cfg.shock_mag >= 0.0)) {
    throw io::ConfigError("state-space: shock magnitude must be >= 0");
  }
  std::vector<double> dates;
  for (double t = 0.0; t <= cfg.horizon + 1e-9; t += cfg.dt) dates.push_back(t);
  const std::vector<double> states =
      simulate_ou(cfg.ou, dates, cfg.n_paths, cfg.seed);

  std::string body = "t,q01,q99,q01_shocked,q99_shocked\n";
  const std::size_t K = dates.size();
  std::vector<double> column(cfg.n_paths);
  for (std::size_t k = 0; k < K; ++k) {
    for (std::size_t p = 0; p < cfg.n_paths; ++p) column[p] = states[p * K + k];
    const double q01 = order_stat_quantile(column, 0.01);
    const double q99 = order_stat_quantile(column, 0.99);
    const double lo = std::min(q01 * (1.0 - cfg.shock_mag), q01 * (1.0 + cfg.shock_mag));
    const double hi = std::max(q99 * (1.0 - cfg.shock_mag), q99 * (1.0 + cfg.shock_mag));
    body += io::format_double(dates[k]) + ',' + io::format_double(q01) + ',' +
            io::format_double(q99) + ',' + io::format_double(lo) + ',' +
            io::format_double(hi) + '\n';
  }
  return body;
}

}  // namespace mva
