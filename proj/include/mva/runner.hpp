#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "mva/instruments.hpp"
#include "mva/io.hpp"
#include "mva/lsac.hpp"
#include "mva/oracle.hpp"
#include "mva/simulation.hpp"
#include "mva/xva.hpp"

namespace mva {

// Where the shock scenarios come from. Exactly one source is active.
struct ShockSourceConfig {
  enum class Kind { synth, file, history };
  Kind kind = Kind::synth;
  std::string path;          // file / history
  std::size_t horizon = 10;  // history: move horizon in rows
  std::uint64_t seed = 1;    // synth
  std::size_t count = 1294;  // synth
  double max_rel = 0.3;      // synth
};

// One run, fully determined: same config (and thread-count-independent by
// construction) means byte-identical outputs. Built from JSON with every
// key optional; CLI flags override after parsing.
struct RunConfig {
  std::optional<std::string> portfolio_file;
  PortfolioRecipe recipe;  // used when portfolio_file is not set
  ShockSourceConfig shocks;
  ModelParams model;
  double horizon = 30.0;
  std::size_t n_paths = 1024;
  std::uint64_t sim_seed = 1;
  std::size_t basis_m = 20;
  ImMethod im;
  XvaParams xva;
  std::uint64_t oracle_budget = 1'000'000'000;
  unsigned threads = 0;  // 0 = hardware default
  std::string out_dir = "out";
  std::string kernel = "auto";

  static RunConfig from_json(const nlohmann::json& j);
  static RunConfig from_json_file(const std::string& path);
};

ShockSet load_shocks(const ShockSourceConfig& cfg);
Portfolio load_portfolio(const RunConfig& cfg);

struct RunArtifacts {
  Portfolio portfolio;
  ShockSet shocks;
  ModelParams model;
  SimGrid grid;
  RegressionSet regressions;
  ImProfile im;
  ExposureProfiles exposures;
  XvaResult xva;
};

RunArtifacts run_pipeline(const RunConfig& cfg);

// xva.json, im_profile.csv, exposure.csv, regressions.json under out_dir
// (created if missing). Contents are deterministic: no timestamps, no
// timings, no environment state.
void write_run_outputs(const RunConfig& cfg, const RunArtifacts& arts);

nlohmann::json run_metadata(const RunConfig& cfg, const RunArtifacts& arts);

// Compressed engine vs brute-force reference on the same inputs. The
// brute-force leg respects cfg.oracle_budget. Wall times are measured
// around the IM stages only.
OracleReport run_oracle_compare(const RunConfig& cfg);

struct BenchRow {
  std::size_t n = 0;
  std::size_t slice_paths = 0;
  std::size_t slice_dates = 0;
  std::size_t shocks = 0;
  double fit_seconds = 0.0;
  double lsac_im_seconds = 0.0;
  double brute_im_seconds = 0.0;  // 0 when skipped
  bool brute_skipped = false;
  double speedup = 0.0;  // brute / lsac, 0 when skipped
};

// Identical reduced slices per portfolio size: the stopping-date grid is
// thinned to every 10th semiannual date so the brute-force leg stays
// affordable, and the same slice is timed for every n. Each timing is the
// median of repeated runs accumulated until 0.3 s of work; the compressed
// leg gets one warmup pass first. Brute-force legs whose cost estimate
// exceeds cfg.oracle_budget are skipped and flagged.
std::vector<BenchRow> run_bench(const RunConfig& cfg,
                                const std::vector<std::size_t>& sizes);

std::string bench_csv(const std::vector<BenchRow>& rows);

// Augmentation coverage diagnostic on a standalone mean-reverting process:
// simulated 1%/99% state bands against the same bands widened by the
// largest relative shock magnitude.
struct StateSpaceConfig {
  OuParams ou;
  double horizon = 30.0;
  double dt = 0.5;
  std::size_t n_paths = 1024;
  std::uint64_t seed = 1;
  double shock_mag = 0.3;
};

std::string state_space_csv(const StateSpaceConfig& cfg);

}  // namespace mva
