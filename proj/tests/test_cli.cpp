#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "ealab/experiment.hpp"

#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <sys/wait.h>
#include <unistd.h>

using namespace ealab;
namespace fs = std::filesystem;

namespace {

fs::path fresh_dir(const std::string& tag) {
  fs::path d = fs::temp_directory_path() / ("ealab_test_" + tag + "_" +
                                            std::to_string(::getpid()));
  fs::remove_all(d);
  fs::create_directories(d);
  return d;
}

ExperimentConfig parse_str(const std::string& text) {
  std::istringstream in(text);
  return ExperimentConfig::parse(in);
}

}  // namespace

TEST_CASE("config parsing: happy path with arrays and comments") {
  ExperimentConfig cfg = parse_str(
      "# covert sweep\n"
      "experiment = FIG4_COVERT\n"
      "kappa = 0.1\n"
      "n_b = 10\n"
      "n_s = 1e-4 1e-3 1e-2   # three grid points\n"
      "delta = 0.01\n"
      "seed = 99\n");
  CHECK(cfg.experiment == ExperimentKind::FIG4_COVERT);
  REQUIRE(cfg.n_s.size() == 3);
  CHECK(cfg.n_s[1] == doctest::Approx(1e-3));
  CHECK(cfg.seed == 99);
}

TEST_CASE("config parsing: validation errors name the offending field") {
  CHECK_THROWS_WITH_AS(parse_str("experiment = FIG_UNKNOWN\n"),
                       doctest::Contains("experiment"), config_error);
  CHECK_THROWS_WITH_AS(parse_str("bogus_key = 1\n"), doctest::Contains("bogus_key"),
                       config_error);
  CHECK_THROWS_WITH_AS(parse_str("kappa = fast\n"), doctest::Contains("kappa"), config_error);
  CHECK_THROWS_WITH_AS(parse_str("kappa = 1.5\n"), doctest::Contains("kappa"), config_error);
  CHECK_THROWS_WITH_AS(parse_str("n_s =\n"), doctest::Contains("n_s"), config_error);
  CHECK_THROWS_WITH_AS(parse_str("delta = 0.6\n"), doctest::Contains("delta"), config_error);
  CHECK_THROWS_AS(parse_str("experiment\n"), config_error);
  CHECK_THROWS_AS(ExperimentConfig::parse_file("/nonexistent/path.cfg"), config_error);
}

TEST_CASE("run + verify: untouched output passes, corruption is flagged") {
  ExperimentConfig cfg = parse_str(
      "experiment = FIG4_COVERT\n"
      "kappa = 0.1\nn_b = 10\nn_s = 1e-4 3e-4 1e-3 3e-3 1e-2\ndelta = 0.01\n");
  fs::path dir = fresh_dir("verify");
  cfg.output_dir = dir.string();
  RunOutput out = run_experiment(cfg);
  CHECK(out.all_ok);
  CHECK(fs::exists(dir / "manifest.json"));
  CHECK(fs::exists(dir / "covert_ratio.csv"));
  CHECK(fs::exists(dir / "plot.py"));

  VerifyReport rep = verify_manifest(out.manifest_path);
  CHECK(rep.pass);
  CHECK_FALSE(rep.stale);

  // corrupt one CSV -> hash mismatch flagged as stale
  {
    std::ofstream f(dir / "covert_ratio.csv", std::ios::app);
    f << "tampered\n";
  }
  VerifyReport rep2 = verify_manifest(out.manifest_path);
  CHECK_FALSE(rep2.pass);
  CHECK(rep2.stale);
  fs::remove_all(dir);
}

TEST_CASE("analytic curves are seed-independent") {
  std::string base =
      "experiment = CUSTOM\nkappa = 0.2 0.7\nn_b = 1 5\nn_s = 0.1 0.5\n";
  fs::path d1 = fresh_dir("seed1"), d2 = fresh_dir("seed2");
  ExperimentConfig c1 = parse_str(base + "seed = 1\n");
  ExperimentConfig c2 = parse_str(base + "seed = 2\n");
  c1.output_dir = d1.string();
  c2.output_dir = d2.string();
  run_experiment(c1);
  run_experiment(c2);
  std::ifstream f1(d1 / "capacity_report.csv"), f2(d2 / "capacity_report.csv");
  std::string l1, l2;
  int differing = 0;
  while (std::getline(f1, l1) && std::getline(f2, l2)) {
    if (l1[0] == '#') continue;  // metadata embeds the seed
    if (l1 != l2) ++differing;
  }
  CHECK(differing == 0);
  fs::remove_all(d1);
  fs::remove_all(d2);
}

TEST_CASE("metadata closure: the CSV header re-parses into the same experiment") {
  ExperimentConfig cfg = parse_str(
      "experiment = FIG4_COVERT\nkappa = 0.1\nn_b = 10\nn_s = 1e-3 1e-2\ndelta = 0.01\n");
  fs::path dir = fresh_dir("closure");
  cfg.output_dir = dir.string();
  run_experiment(cfg);

  std::ifstream in(dir / "covert_ea.csv");
  std::ostringstream meta;
  for (std::string line; std::getline(in, line);) {
    if (line.rfind("# info:", 0) == 0) continue;  // informational, not config
    if (line.rfind("# ", 0) == 0) meta << line.substr(2) << "\n";
  }
  ExperimentConfig round = parse_str(meta.str());
  CHECK(round.experiment == cfg.experiment);
  CHECK(round.n_s == cfg.n_s);
  CHECK(round.delta == cfg.delta);
  CHECK(round.seed == cfg.seed);
  fs::remove_all(dir);
}

TEST_CASE("Monte Carlo curves reproduce bit-identically under the stored seed") {
  ExperimentConfig cfg = parse_str(
      "experiment = FIG9_ADAPTIVE\nkappa = 0.1\nn_b = 10\nn_s = 0.1\n"
      "m_modes = 1e4\nmc_samples = 30\ncycles = 3\nseed = 5\n");
  fs::path dir = fresh_dir("mc");
  cfg.output_dir = dir.string();
  RunOutput out = run_experiment(cfg);
  CHECK(out.all_ok);
  VerifyReport rep = verify_manifest(out.manifest_path);
  CHECK(rep.pass);
  fs::remove_all(dir);
}

TEST_CASE("list_experiments covers every config-visible kind") {
  auto xs = list_experiments();
  CHECK(xs.size() == 7);
  for (const auto& [name, desc] : xs) {
    CHECK_FALSE(desc.empty());
    std::istringstream in("experiment = " + name + "\n");
    CHECK_NOTHROW(ExperimentConfig::parse(in));
  }
}

#ifdef EA_LAB_BINARY
TEST_CASE("binary smoke test: exit codes 0 / 1 / 2 semantics") {
  fs::path dir = fresh_dir("bin");
  fs::path cfg_path = dir / "run.cfg";
  {
    std::ofstream f(cfg_path);
    f << "experiment = CUSTOM\nkappa = 0.5\nn_b = 1\nn_s = 0.1\noutput_dir = "
      << (dir / "out").string() << "\n";
  }
  std::string bin = EA_LAB_BINARY;
  CHECK(std::system((bin + " list-experiments > /dev/null").c_str()) == 0);
  CHECK(std::system((bin + " run " + cfg_path.string() + " > /dev/null").c_str()) == 0);
  CHECK(std::system((bin + " verify " + (dir / "out" / "manifest.json").string() +
                     " > /dev/null").c_str()) == 0);

  fs::path bad_cfg = dir / "bad.cfg";
  {
    std::ofstream f(bad_cfg);
    f << "experiment = CUSTOM\nkappa = 2.0\n";
  }
  int rc = std::system((bin + " run " + bad_cfg.string() + " 2> /dev/null").c_str());
  CHECK(WEXITSTATUS(rc) == 1);

  {
    std::ofstream f(dir / "out" / "capacity_report.csv", std::ios::app);
    f << "tampered\n";
  }
  rc = std::system((bin + " verify " + (dir / "out" / "manifest.json").string() +
                    " > /dev/null").c_str());
  CHECK(WEXITSTATUS(rc) == 2);
  fs::remove_all(dir);
}
#endif
