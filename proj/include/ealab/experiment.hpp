#pragma once
// Declarative experiment runner: flat key=value configs, CSV outputs with
// reproducibility metadata, content-hashed run manifests, and spot-check
// verification of previous runs.
#include <cstdint>
#include <istream>
#include <stdexcept>
#include <string>
#include <vector>

namespace ealab {

enum class ExperimentKind {
  FIG3_CAPACITY,   // capacities and phase-encoding Holevo curves vs n_s
  FIG4_COVERT,     // covert mode budget and bit totals vs n_s
  FIG6_RECEIVERS,  // receiver rate / classical capacity vs block size M
  FIG7_ERRORPROB,  // receiver error probabilities vs M (bound + Monte Carlo)
  FIG8_CONTINUOUS, // continuous-encoding rate and repetition benchmark vs M
  FIG9_ADAPTIVE,   // adaptive-estimation variance traces
  CUSTOM,          // capacity report over the full parameter grid
};

class config_error : public std::runtime_error {
 public:
  config_error(const std::string& field, const std::string& what)
      : std::runtime_error("config field '" + field + "': " + what), field(field) {}
  std::string field;
};

struct ExperimentConfig {
  ExperimentKind experiment = ExperimentKind::CUSTOM;
  std::vector<double> kappa{0.1};
  std::vector<double> n_b{10.0};
  std::vector<double> n_s{1e-3};
  std::vector<double> m_modes{1e8};
  std::vector<double> delta{0.01};
  std::vector<double> epsilon{0.05};
  std::vector<double> eta{4e-6};
  std::uint64_t seed = 1;
  long mc_samples = 0;
  int cycles = 50;
  std::string output_dir;
  std::string raw_text;  // config body, embedded in the manifest for re-runs

  static ExperimentConfig parse(std::istream& in);
  static ExperimentConfig parse_file(const std::string& path);
  void validate() const;
};

struct Curve {
  std::string name;
  std::vector<std::string> columns;
  std::vector<std::vector<double>> rows;
  bool monte_carlo = false;
  double tolerance_rel = 1e-12;
  int stderr_col = -1;  // column index of the MC standard error, if any
};

struct CurveOutcome {
  Curve curve;
  bool ok = true;
  std::string error;
};

// pure computation of every curve of the experiment (partial failures are
// reported per curve, not thrown)
std::vector<CurveOutcome> compute_curves(const ExperimentConfig& cfg);

struct RunOutput {
  std::vector<std::string> files;
  std::string manifest_path;
  bool all_ok = true;
};

RunOutput run_experiment(const ExperimentConfig& cfg);

struct VerifyReport {
  bool pass = true;
  bool stale = false;  // content-hash mismatch
  std::vector<std::string> messages;
};

VerifyReport verify_manifest(const std::string& manifest_path);

std::vector<std::pair<std::string, std::string>> list_experiments();

std::uint64_t fnv1a_file(const std::string& path);

}  // namespace ealab
