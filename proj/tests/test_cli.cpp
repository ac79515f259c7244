#include <doctest.h>

#include <sys/wait.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <string>

#include "mva/io.hpp"
#include "mva/market.hpp"

using namespace mva;

namespace {

namespace fs = std::filesystem;

fs::path tmp_dir(const std::string& leaf) {
  auto d = fs::temp_directory_path() / "mva_cli_tests" / leaf;
  fs::create_directories(d);
  return d;
}

int run_cli(const std::string& args, const fs::path& log) {
  const std::string cmd =
      std::string(MVA_CLI_PATH) + " " + args + " > " + log.string() + " 2>&1";
  const int rc = std::system(cmd.c_str());
  if (rc == -1) return -1;
  if (WIFEXITED(rc)) return WEXITSTATUS(rc);
  return -2;
}

std::string slurp(const fs::path& p) { return io::read_file(p.string()); }

void write_small_config(const fs::path& path, const fs::path& out_dir,
                        const std::string& extra = "") {
  std::ofstream f(path);
  f << R"({
  "portfolio": {"recipe": {"n": 8, "seed": 3}},
  "shocks": {"synth": {"seed": 5, "count": 16, "max_rel": 0.3}},
  "model": {"flat_rate": 0.025, "sigma": 0.01},
  "grid": {"horizon": 5.0, "n_paths": 32, "seed": 7},
  "basis_m": 2,
  "im": {"method": "var", "confidence": 0.9})"
    << extra << R"(,
  "out_dir": ")" << out_dir.string() << R"("
})";
}

}  // namespace

TEST_CASE("help exits cleanly and bad flags do not") {
  auto dir = tmp_dir("basic");
  CHECK(run_cli("--help", dir / "help.log") == 0);
  CHECK(run_cli("run --help", dir / "run_help.log") == 0);
  CHECK(run_cli("--no-such-flag", dir / "bad.log") == 2);
  CHECK(run_cli("no-such-command", dir / "bad_cmd.log") == 2);
}

TEST_CASE("portfolio generation is deterministic and loadable") {
  auto dir = tmp_dir("gen_portfolio");
  const auto a = dir / "a.json";
  const auto b = dir / "b.json";
  CHECK(run_cli("gen-portfolio --n 25 --seed 9 --out " + a.string(),
                dir / "a.log") == 0);
  CHECK(run_cli("gen-portfolio --n 25 --seed 9 --out " + b.string(),
                dir / "b.log") == 0);
  CHECK(slurp(a) == slurp(b));
  Portfolio p = io::read_portfolio_json(a.string());
  CHECK(p.size() == 25);
  CHECK(run_cli("gen-portfolio --n 25 --p-payer 2.0 --out " +
                    (dir / "bad.json").string(),
                dir / "bad.log") == 2);
}

TEST_CASE("shock generation writes the documented csv") {
  auto dir = tmp_dir("gen_shocks");
  const auto out = dir / "shocks.csv";
  CHECK(run_cli("gen-shocks --shocks synth:7:40 --max-rel 0.25 --out " +
                    out.string(),
                dir / "synth.log") == 0);
  ShockSet s = io::read_shocks_csv(out.string());
  CHECK(s.size() == 40);
  double peak = 0.0;
  for (const auto& sh : s.shocks) {
    for (double v : sh.rel) peak = std::max(peak, std::fabs(v));
  }
  CHECK(peak == 0.25);

  // history extraction: constant relative move of +10% per two rows
  std::string hist = "date," + io::shock_csv_header() + "\n";
  const double levels[4] = {0.02, 0.021, 0.022, 0.0231};
  for (int r = 0; r < 4; ++r) {
    hist += "2020-01-0" + std::to_string(r + 1);
    for (std::size_t j = 0; j < kTenorCount; ++j) {
      hist += "," + io::format_double(levels[r]);
    }
    hist += "\n";
  }
  io::write_file((dir / "hist.csv").string(), hist);
  const auto hout = dir / "hist_shocks.csv";
  CHECK(run_cli("gen-shocks --history " + (dir / "hist.csv").string() +
                    " --horizon 2 --out " + hout.string(),
                dir / "hist.log") == 0);
  ShockSet hs = io::read_shocks_csv(hout.string());
  CHECK(hs.size() == 2);
  CHECK(hs.shocks[0].rel[0] ==
        doctest::Approx(0.022 / 0.02 - 1.0).epsilon(1e-12));
}

TEST_CASE("a full run writes the four output files") {
  auto dir = tmp_dir("run_outputs");
  write_small_config(dir / "config.json", dir / "out");
  CHECK(run_cli("run --config " + (dir / "config.json").string(),
                dir / "run.log") == 0);
  for (const char* name :
       {"xva.json", "im_profile.csv", "exposure.csv", "regressions.json"}) {
    CHECK(fs::exists(dir / "out" / name));
  }
  const std::string xva = slurp(dir / "out" / "xva.json");
  CHECK(xva.find("mva_bps") != std::string::npos);
  CHECK(xva.find("kva_bps") != std::string::npos);
}

TEST_CASE("outputs are byte-identical across thread counts") {
  auto dir = tmp_dir("threads");
  write_small_config(dir / "config.json", dir / "out1");
  CHECK(run_cli("run --config " + (dir / "config.json").string() +
                    " --threads 1",
                dir / "t1.log") == 0);
  write_small_config(dir / "config2.json", dir / "out2");
  CHECK(run_cli("run --config " + (dir / "config2.json").string() +
                    " --threads 2",
                dir / "t2.log") == 0);
  for (const char* name :
       {"xva.json", "im_profile.csv", "exposure.csv", "regressions.json"}) {
    CHECK(slurp(dir / "out1" / name) == slurp(dir / "out2" / name));
  }
}

TEST_CASE("the master seed overrides recipe and simulation seeds") {
  auto dir = tmp_dir("seed_override");
  write_small_config(dir / "config.json", dir / "out1");
  CHECK(run_cli("run --config " + (dir / "config.json").string() +
                    " --seed 101",
                dir / "s1.log") == 0);
  write_small_config(dir / "config2.json", dir / "out2");
  CHECK(run_cli("run --config " + (dir / "config2.json").string() +
                    " --seed 202",
                dir / "s2.log") == 0);
  CHECK(slurp(dir / "out1" / "xva.json") != slurp(dir / "out2" / "xva.json"));
}

TEST_CASE("kernel selection accepts scalar and rejects unknown names") {
  auto dir = tmp_dir("kernels");
  write_small_config(dir / "config.json", dir / "out");
  CHECK(run_cli("run --config " + (dir / "config.json").string() +
                    " --kernel scalar",
                dir / "scalar.log") == 0);
  write_small_config(dir / "config2.json", dir / "out_bad");
  CHECK(run_cli("run --config " + (dir / "config2.json").string() +
                    " --kernel turbo",
                dir / "turbo.log") == 2);
}

TEST_CASE("config errors map to exit code 2") {
  auto dir = tmp_dir("bad_config");
  io::write_file((dir / "bad.json").string(), "{\"bogus\": 1}");
  CHECK(run_cli("run --config " + (dir / "bad.json").string(),
                dir / "bad.log") == 2);
  CHECK(run_cli("run --config " + (dir / "missing.json").string(),
                dir / "missing.log") == 2);
  const std::string log = slurp(dir / "bad.log");
  CHECK(log.find("bogus") != std::string::npos);
}

TEST_CASE("oversized reference jobs map to exit code 3") {
  auto dir = tmp_dir("budget");
  write_small_config(dir / "config.json", dir / "out",
                     ",\n  \"oracle_budget\": 10");
  CHECK(run_cli("oracle-compare --config " + (dir / "config.json").string(),
                dir / "oc.log") == 3);
  const std::string log = slurp(dir / "oc.log");
  CHECK(log.find("budget") != std::string::npos);
}

TEST_CASE("oracle comparison writes its report files") {
  auto dir = tmp_dir("oracle_ok");
  write_small_config(dir / "config.json", dir / "out");
  CHECK(run_cli("oracle-compare --config " + (dir / "config.json").string(),
                dir / "oc.log") == 0);
  CHECK(fs::exists(dir / "out" / "oracle_report.json"));
  CHECK(fs::exists(dir / "out" / "oracle_report.csv"));
  const std::string rep = slurp(dir / "out" / "oracle_report.json");
  CHECK(rep.find("max_im_err_bps") != std::string::npos);
}

TEST_CASE("generated portfolios feed back into runs") {
  auto dir = tmp_dir("roundtrip");
  const auto book = dir / "book.json";
  CHECK(run_cli("gen-portfolio --n 6 --seed 2 --out " + book.string(),
                dir / "gen.log") == 0);
  write_small_config(dir / "config.json", dir / "out");
  CHECK(run_cli("run --config " + (dir / "config.json").string() +
                    " --portfolio " + book.string(),
                dir / "run.log") == 0);
  CHECK(fs::exists(dir / "out" / "xva.json"));
  const std::string xva = slurp(dir / "out" / "xva.json");
  CHECK(xva.find("\"trades\": 6") != std::string::npos);
}

TEST_CASE("the state space diagnostic writes its csv") {
  auto dir = tmp_dir("state_space");
  const auto out = dir / "bands.csv";
  CHECK(run_cli("state-space --horizon 5 --dt 0.5 --paths 64 --seed 3 --out " +
                    out.string(),
                dir / "ss.log") == 0);
  const std::string csv = slurp(out);
  CHECK(csv.rfind("t,q01,q99,q01_shocked,q99_shocked\n", 0) == 0);
}

TEST_CASE("bench emits one csv row per size") {
  auto dir = tmp_dir("bench");
  write_small_config(dir / "config.json", dir / "out");
  CHECK(run_cli("bench --config " + (dir / "config.json").string() +
                    " --sizes 5 --sizes 10",
                dir / "bench.log") == 0);
  const std::string csv = slurp(dir / "out" / "bench.csv");
  CHECK(csv.rfind("n,slice_paths,slice_dates,shocks,", 0) == 0);
  CHECK(std::count(csv.begin(), csv.end(), '\n') == 3);
}
