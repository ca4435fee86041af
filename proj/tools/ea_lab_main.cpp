// ea-lab: command-line front end for the entanglement-assisted communication
// experiment runner. Exit codes: 0 success, 1 validation error, 2 numerical
// failure.
#include "ealab/experiment.hpp"
#include "ealab/kernels.hpp"

#include <CLI11.hpp>

#include <cstdlib>
#include <iostream>

int main(int argc, char** argv) {
  CLI::App app{"ea-lab: entanglement-assisted bosonic communication experiments"};
  app.require_subcommand(1);

  std::string config_path, manifest_path, output_dir;

  CLI::App* run = app.add_subcommand("run", "run an experiment config, write CSVs + manifest");
  run->add_option("config", config_path, "key = value config file")->required();
  run->add_option("-o,--output-dir", output_dir,
                  "output directory (overrides config and EA_LAB_OUTPUT_DIR)");

  CLI::App* verify =
      app.add_subcommand("verify", "check a previous run against recomputed values");
  verify->add_option("manifest", manifest_path, "manifest.json from a previous run")->required();

  app.add_subcommand("list-experiments", "list available experiment kinds");

  CLI11_PARSE(app, argc, argv);

  try {
    if (app.got_subcommand("list-experiments")) {
      for (const auto& [name, desc] : ealab::list_experiments())
        std::cout << name << "\t" << desc << "\n";
      return 0;
    }
    if (app.got_subcommand("run")) {
      ealab::ExperimentConfig cfg = ealab::ExperimentConfig::parse_file(config_path);
      if (!output_dir.empty()) {
        cfg.output_dir = output_dir;
      } else if (cfg.output_dir.empty()) {
        if (const char* env = std::getenv("EA_LAB_OUTPUT_DIR")) cfg.output_dir = env;
      }
      if (cfg.output_dir.empty()) {
        std::cerr << "error: no output directory (set output_dir in the config, pass "
                     "--output-dir, or export EA_LAB_OUTPUT_DIR)\n";
        return 1;
      }
      std::cerr << "numeric backend: " << ealab::kernels::active_backend() << "\n";
      ealab::RunOutput out = ealab::run_experiment(cfg);
      for (const std::string& f : out.files) std::cout << f << "\n";
      std::cout << out.manifest_path << "\n";
      if (!out.all_ok) {
        std::cerr << "error: some curves failed; see " << out.manifest_path << "\n";
        return 2;
      }
      return 0;
    }
    // verify
    ealab::VerifyReport rep = ealab::verify_manifest(manifest_path);
    for (const std::string& m : rep.messages) std::cout << m << "\n";
    std::cout << (rep.pass ? "PASS" : "FAIL") << "\n";
    return rep.pass ? 0 : 2;
  } catch (const ealab::config_error& e) {
    std::cerr << "validation error: " << e.what() << "\n";
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "numerical failure: " << e.what() << "\n";
    return 2;
  }
}
