#include "ealab/experiment.hpp"

#include "ealab/capacities.hpp"
#include "ealab/covert.hpp"
#include "ealab/estimation.hpp"
#include "ealab/phase_holevo.hpp"
#include "ealab/receivers.hpp"

#include <json.hpp>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <random>
#include <sstream>

namespace fs = std::filesystem;
using nlohmann::json;

namespace ealab {

namespace {

constexpr const char* kCodeVersion = "1.0.0";

const std::vector<std::pair<std::string, ExperimentKind>> kKindNames = {
    {"FIG3_CAPACITY", ExperimentKind::FIG3_CAPACITY},
    {"FIG4_COVERT", ExperimentKind::FIG4_COVERT},
    {"FIG6_RECEIVERS", ExperimentKind::FIG6_RECEIVERS},
    {"FIG7_ERRORPROB", ExperimentKind::FIG7_ERRORPROB},
    {"FIG8_CONTINUOUS", ExperimentKind::FIG8_CONTINUOUS},
    {"FIG9_ADAPTIVE", ExperimentKind::FIG9_ADAPTIVE},
    {"CUSTOM", ExperimentKind::CUSTOM},
};

std::string kind_name(ExperimentKind k) {
  for (const auto& [name, kind] : kKindNames)
    if (kind == k) return name;
  return "CUSTOM";
}

ExperimentKind kind_from_name(const std::string& name) {
  for (const auto& [n, kind] : kKindNames)
    if (n == name) return kind;
  throw config_error("experiment", "unknown experiment '" + name + "'");
}

std::string trim(const std::string& s) {
  auto b = s.find_first_not_of(" \t\r\n");
  if (b == std::string::npos) return "";
  auto e = s.find_last_not_of(" \t\r\n");
  return s.substr(b, e - b + 1);
}

std::vector<double> parse_numbers(const std::string& key, const std::string& value) {
  std::istringstream iss(value);
  std::vector<double> out;
  std::string tok;
  while (iss >> tok) {
    try {
      std::size_t pos = 0;
      double v = std::stod(tok, &pos);
      if (pos != tok.size()) throw std::invalid_argument(tok);
      out.push_back(v);
    } catch (const std::exception&) {
      throw config_error(key, "not a number: '" + tok + "'");
    }
  }
  if (out.empty()) throw config_error(key, "empty value");
  return out;
}

void require_range(const std::string& key, const std::vector<double>& v, double lo,
                   double hi, bool lo_open = false, bool hi_open = false) {
  for (double x : v) {
    bool ok = (lo_open ? x > lo : x >= lo) && (hi_open ? x < hi : x <= hi);
    if (!ok || !std::isfinite(x))
      throw config_error(key, "value " + std::to_string(x) + " outside allowed range");
  }
}

std::string format_g17(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::string format_list(const std::vector<double>& v) {
  std::string s;
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (i) s += " ";
    s += format_g17(v[i]);
  }
  return s;
}

// canonical key=value serialization; parse(serialize(cfg)) == cfg
std::string serialize_config(const ExperimentConfig& cfg) {
  std::ostringstream os;
  os << "experiment = " << kind_name(cfg.experiment) << "\n"
     << "kappa = " << format_list(cfg.kappa) << "\n"
     << "n_b = " << format_list(cfg.n_b) << "\n"
     << "n_s = " << format_list(cfg.n_s) << "\n"
     << "m_modes = " << format_list(cfg.m_modes) << "\n"
     << "delta = " << format_list(cfg.delta) << "\n"
     << "epsilon = " << format_list(cfg.epsilon) << "\n"
     << "eta = " << format_list(cfg.eta) << "\n"
     << "seed = " << cfg.seed << "\n"
     << "mc_samples = " << cfg.mc_samples << "\n"
     << "cycles = " << cfg.cycles << "\n";
  if (!cfg.output_dir.empty()) os << "output_dir = " << cfg.output_dir << "\n";
  return os.str();
}

void atomic_write(const fs::path& path, const std::string& content) {
  fs::path tmp = path;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary);
    if (!out) throw std::runtime_error("cannot open for write: " + tmp.string());
    out << content;
    if (!out.flush()) throw std::runtime_error("write failed: " + tmp.string());
  }
  fs::rename(tmp, path);
}

std::uint64_t splitmix64(std::uint64_t& s) {
  s += 0x9E3779B97F4A7C15ULL;
  std::uint64_t z = s;
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

double wrap_2pi(double x) {
  x = std::fmod(x, 2.0 * M_PI);
  return x < 0.0 ? x + 2.0 * M_PI : x;
}

// ---- per-experiment curve builders -------------------------------------

std::vector<CurveOutcome> curves_fig3(const ExperimentConfig& cfg) {
  ChannelParams base{cfg.kappa[0], cfg.n_b[0], 0.0};
  std::vector<CurveOutcome> out;

  Curve ce{"capacity", {"n_s", "c_classical", "c_ea", "ratio"}, {}, false, 1e-12, -1};
  for (double ns : cfg.n_s) {
    ChannelParams ch = base;
    ch.n_s = ns;
    CapacityReport r = capacity_report(ch);
    ce.rows.push_back({ns, r.c_classical, r.c_ea, r.ratio_ea});
  }
  out.push_back({ce, true, ""});

  Curve cont{"chi_continuous", {"n_s", "chi"}, {}, false, 1e-6, -1};
  CurveOutcome cont_out{cont, true, ""};
  try {
    for (double ns : cfg.n_s) {
      ChannelParams ch = base;
      ch.n_s = ns;
      cont_out.curve.rows.push_back({ns, holevo_continuous_phase(ch)});
    }
  } catch (const std::exception& e) {
    cont_out.ok = false;
    cont_out.error = e.what();
  }
  out.push_back(cont_out);

  Curve bpsk{"chi_bpsk", {"n_s", "chi"}, {}, false, 1e-6, -1};
  CurveOutcome bpsk_out{bpsk, true, ""};
  try {
    for (double ns : cfg.n_s) {
      ChannelParams ch = base;
      ch.n_s = ns;
      bpsk_out.curve.rows.push_back({ns, holevo_bpsk(ch)});
    }
  } catch (const std::exception& e) {
    bpsk_out.ok = false;
    bpsk_out.error = e.what();
  }
  out.push_back(bpsk_out);

  for (double m : cfg.m_modes) {
    std::ostringstream name;
    name << "chi_sfg_M" << format_g17(m);
    Curve sfg{name.str(), {"n_s", "chi_per_mode"}, {}, false, 1e-6, -1};
    CurveOutcome sfg_out{sfg, true, ""};
    try {
      for (double ns : cfg.n_s) {
        ChannelParams ch = base;
        ch.n_s = ns;
        sfg_out.curve.rows.push_back({ns, holevo_sfg_estimate(m, ch, cfg.epsilon[0])});
      }
    } catch (const std::exception& e) {
      sfg_out.ok = false;
      sfg_out.error = e.what();
    }
    out.push_back(sfg_out);
  }
  return out;
}

std::vector<CurveOutcome> curves_fig4(const ExperimentConfig& cfg) {
  ChannelParams base{cfg.kappa[0], cfg.n_b[0], 0.0};
  double delta = cfg.delta[0];
  Curve cls{"covert_classical", {"n_s", "n_delta", "bits"}, {}, false, 1e-12, -1};
  Curve ea{"covert_ea", {"n_s", "n_delta", "bits"}, {}, false, 1e-12, -1};
  Curve ratio{"covert_ratio", {"n_s", "n_delta", "ratio"}, {}, false, 1e-12, -1};
  for (double ns : cfg.n_s) {
    ChannelParams ch = base;
    ch.n_s = ns;
    CovertBudget b = covert_bits(delta, ch);
    cls.rows.push_back({ns, b.n_modes_max, b.bits_classical});
    ea.rows.push_back({ns, b.n_modes_max, b.bits_ea});
    ratio.rows.push_back({ns, b.n_modes_max, b.bits_ea / b.bits_classical});
  }
  return {{cls, true, ""}, {ea, true, ""}, {ratio, true, ""}};
}

std::vector<CurveOutcome> curves_receivers(const ExperimentConfig& cfg, bool as_error) {
  ChannelParams ch{cfg.kappa[0], cfg.n_b[0], cfg.n_s[0]};
  double cap = classical_capacity(ch);
  auto value_of = [&](const DiscriminationResult& r) {
    return as_error ? r.p_error : r.rate_per_mode / cap;
  };
  const char* col = as_error ? "p_error" : "rate_over_capacity";

  std::vector<CurveOutcome> out;
  Curve opa{"opa", {"m_modes", col}, {}, false, 1e-12, -1};
  Curve pcr{"pcr", {"m_modes", col}, {}, false, 1e-12, -1};
  for (double m : cfg.m_modes) {
    opa.rows.push_back({m, value_of(opa_error_prob({opa_optimal_gain(ch), m, ch}))});
    pcr.rows.push_back({m, value_of(pcr_error_prob(m, ch))});
  }
  out.push_back({opa, true, ""});
  out.push_back({pcr, true, ""});

  Curve sfgb{"sfg_bound", {"m_modes", col}, {}, false, 1e-9, -1};
  CurveOutcome sfgb_out{sfgb, true, ""};
  try {
    for (double m : cfg.m_modes)
      sfgb_out.curve.rows.push_back({m, value_of(sfg_helstrom_bound(m, ch, cfg.epsilon[0]))});
  } catch (const std::exception& e) {
    sfgb_out.ok = false;
    sfgb_out.error = e.what();
  }
  out.push_back(sfgb_out);

  if (cfg.mc_samples > 0) {
    Curve mc{"sfg_mc", {"m_modes", col, "stderr"}, {}, true, 1e-12, 2};
    CurveOutcome mc_out{mc, true, ""};
    try {
      SfgConfig sc;
      sc.eta = cfg.eta[0];
      sc.cycles = cfg.cycles;
      sc.epsilon = cfg.epsilon[0];
      sc.samples = cfg.mc_samples;
      for (std::size_t i = 0; i < cfg.m_modes.size(); ++i) {
        double m = cfg.m_modes[i];
        sc.seed = cfg.seed + 1000 * i;
        DiscriminationResult r0 = sfg_simulate(sc, m, ch, 0.0);
        sc.seed = cfg.seed + 1000 * i + 500;
        DiscriminationResult r1 = sfg_simulate(sc, m, ch, M_PI);
        double pe = 0.5 * (r0.p_error + r1.p_error);
        double se = 0.5 * std::hypot(r0.mc_stderr.value_or(0.0), r1.mc_stderr.value_or(0.0));
        double v = as_error ? pe : rate_from_error(pe, m) / cap;
        // first-order error propagation of the stderr through the rate map
        double v_se = se;
        if (!as_error) {
          double dp = std::max(se, 1e-12);
          v_se = std::fabs(rate_from_error(std::min(pe + dp, 0.5), m) -
                           rate_from_error(std::max(pe - dp, 0.0), m)) /
                 (2.0 * dp) * se / cap;
        }
        mc_out.curve.rows.push_back({m, v, v_se});
      }
    } catch (const std::exception& e) {
      mc_out.ok = false;
      mc_out.error = e.what();
    }
    out.push_back(mc_out);
  }
  return out;
}

std::vector<CurveOutcome> curves_fig8(const ExperimentConfig& cfg) {
  ChannelParams ch{cfg.kappa[0], cfg.n_b[0], cfg.n_s[0]};
  std::vector<CurveOutcome> out;

  Curve bench{"chi_repetition", {"m_modes", "chi_per_mode"}, {}, false, 1e-6, -1};
  CurveOutcome bench_out{bench, true, ""};
  try {
    for (double m : cfg.m_modes)
      bench_out.curve.rows.push_back({m, holevo_sfg_estimate(m, ch, cfg.epsilon[0])});
  } catch (const std::exception& e) {
    bench_out.ok = false;
    bench_out.error = e.what();
  }
  out.push_back(bench_out);

  long samples = cfg.mc_samples > 0 ? cfg.mc_samples : 2000;
  Curve mr{"rate_continuous_mc", {"m_modes", "rate_per_mode"}, {}, true, 1e-12, -1};
  CurveOutcome mr_out{mr, true, ""};
  try {
    const int n_bins = 128;
    double gain_theta0;  // gain optimized for the channel
    gain_theta0 = opa_optimal_gain(ch);
    for (std::size_t mi = 0; mi < cfg.m_modes.size(); ++mi) {
      double m = cfg.m_modes[mi];
      Schedule sched = Schedule::uniform(m, cfg.cycles, ShiftStrategy::VAN_TREES);
      std::vector<double> hist(n_bins, 0.0);
      std::uint64_t s = cfg.seed + 77777ULL * mi;
      for (long t = 0; t < samples; ++t) {
        std::uint64_t traj_seed = splitmix64(s);
        double theta_true = wrap_2pi(double(splitmix64(s) >> 11) * 0x1.0p-53 * 2.0 * M_PI);
        EstimationResult r =
            run_adaptive_estimation(sched, ch, gain_theta0, theta_true, traj_seed, 1024);
        double diff = wrap_2pi(r.estimate - theta_true);
        int bin = std::min(int(diff / (2.0 * M_PI) * n_bins), n_bins - 1);
        hist[bin] += 1.0;
      }
      // phase covariance: P(theta_hat | theta) depends only on theta_hat - theta,
      // so one histogram of wrapped differences fills the whole channel matrix
      double w = 2.0 * M_PI / n_bins;
      Eigen::MatrixXd channel(n_bins, n_bins);
      for (int i = 0; i < n_bins; ++i)
        for (int j = 0; j < n_bins; ++j)
          channel(i, j) = hist[((j - i) % n_bins + n_bins) % n_bins] / (samples * w);
      mr_out.curve.rows.push_back({m, continuous_rate(channel, m)});
    }
  } catch (const std::exception& e) {
    mr_out.ok = false;
    mr_out.error = e.what();
  }
  out.push_back(mr_out);
  return out;
}

std::vector<CurveOutcome> curves_fig9(const ExperimentConfig& cfg) {
  ChannelParams ch{cfg.kappa[0], cfg.n_b[0], cfg.n_s[0]};
  double m = cfg.m_modes[0];
  double gain = opa_optimal_gain(ch);
  double j_tmss = qfi_tmsv(ch);
  long samples = cfg.mc_samples > 0 ? cfg.mc_samples : 1000;

  struct Variant {
    std::string name;
    ShiftStrategy strategy;
    int cycles;
  };
  std::vector<Variant> variants = {
      {"van_trees_k10", ShiftStrategy::VAN_TREES, 10},
      {"max_fisher_k3", ShiftStrategy::MAX_FISHER, 3},
      {"max_fisher_k10", ShiftStrategy::MAX_FISHER, 10},
  };

  std::vector<CurveOutcome> out;
  for (std::size_t vi = 0; vi < variants.size(); ++vi) {
    const Variant& v = variants[vi];
    Curve c{v.name, {"progress", "mean_variance", "crlb"}, {}, true, 1e-12, -1};
    CurveOutcome co{c, true, ""};
    try {
      Schedule sched = Schedule::uniform(m, v.cycles, v.strategy);
      std::vector<double> mean_var(v.cycles, 0.0);
      std::vector<double> progress(v.cycles, 0.0);
      std::uint64_t s = cfg.seed + 31337ULL * vi;
      for (long t = 0; t < samples; ++t) {
        std::uint64_t traj_seed = splitmix64(s);
        double theta_true = wrap_2pi(double(splitmix64(s) >> 11) * 0x1.0p-53 * 2.0 * M_PI);
        EstimationResult r =
            run_adaptive_estimation(sched, ch, gain, theta_true, traj_seed, 1024);
        for (int k = 0; k < v.cycles; ++k) {
          progress[k] = r.variance_trace[k].first;
          mean_var[k] += r.variance_trace[k].second / samples;
        }
      }
      for (int k = 0; k < v.cycles; ++k)
        co.curve.rows.push_back({progress[k], mean_var[k], 1.0 / (progress[k] * m * j_tmss)});
    } catch (const std::exception& e) {
      co.ok = false;
      co.error = e.what();
    }
    out.push_back(co);
  }
  return out;
}

std::vector<CurveOutcome> curves_custom(const ExperimentConfig& cfg) {
  Curve c{"capacity_report",
          {"kappa", "n_b", "n_s", "c_classical", "c_ea", "c_hom", "c_het", "ratio"},
          {},
          false,
          1e-12,
          -1};
  for (double k : cfg.kappa)
    for (double nb : cfg.n_b)
      for (double ns : cfg.n_s) {
        CapacityReport r = capacity_report({k, nb, ns});
        c.rows.push_back({k, nb, ns, r.c_classical, r.c_ea, r.c_hom, r.c_het, r.ratio_ea});
      }
  return {{c, true, ""}};
}

std::string render_csv(const ExperimentConfig& cfg, const Curve& curve, double wall_s) {
  std::ostringstream os;
  std::istringstream meta(serialize_config(cfg));
  for (std::string line; std::getline(meta, line);)
    if (!line.empty() && line.rfind("output_dir", 0) != 0) os << "# " << line << "\n";
  os << "# info: curve = " << curve.name << "\n";
  os << "# info: code_version = " << kCodeVersion << "\n";
  os << "# info: wall_time_s = " << format_g17(wall_s) << "\n";
  for (std::size_t i = 0; i < curve.columns.size(); ++i)
    os << (i ? "," : "") << curve.columns[i];
  os << "\n";
  for (const auto& row : curve.rows) {
    for (std::size_t i = 0; i < row.size(); ++i) os << (i ? "," : "") << format_g17(row[i]);
    os << "\n";
  }
  return os.str();
}

const char* kPlotTemplate = R"PY(#!/usr/bin/env python3
"""Generic plotter for ea-lab CSV outputs: one line per CSV in this directory,
x = first column, y = second column (log-log when both spans exceed a decade)."""
import csv, glob, math, os, sys

try:
    import matplotlib.pyplot as plt
except ImportError:
    sys.exit("matplotlib is required to plot (the data itself is plain CSV)")

here = os.path.dirname(os.path.abspath(__file__))
fig, ax = plt.subplots()
for path in sorted(glob.glob(os.path.join(here, "*.csv"))):
    xs, ys = [], []
    with open(path) as f:
        rows = [r for r in csv.reader(line for line in f if not line.startswith("#"))]
    for row in rows[1:]:
        xs.append(float(row[0])); ys.append(float(row[1]))
    ax.plot(xs, ys, marker="o", label=os.path.basename(path)[:-4])
    if xs and min(xs) > 0 and max(xs) / min(xs) > 10: ax.set_xscale("log")
ax.legend(); ax.grid(True, alpha=0.3)
fig.savefig(os.path.join(here, "figure.png"), dpi=150)
print("wrote", os.path.join(here, "figure.png"))
)PY";

std::vector<std::vector<double>> parse_csv_rows(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot read " + path);
  std::vector<std::vector<double>> rows;
  bool header_seen = false;
  for (std::string line; std::getline(in, line);) {
    if (line.empty() || line[0] == '#') continue;
    if (!header_seen) {
      header_seen = true;
      continue;
    }
    std::vector<double> row;
    std::istringstream iss(line);
    for (std::string cell; std::getline(iss, cell, ',');) row.push_back(std::stod(cell));
    rows.push_back(std::move(row));
  }
  return rows;
}

}  // namespace

ExperimentConfig ExperimentConfig::parse(std::istream& in) {
  ExperimentConfig cfg;
  std::ostringstream raw;
  int lineno = 0;
  for (std::string line; std::getline(in, line);) {
    ++lineno;
    raw << line << "\n";
    auto hash = line.find('#');
    if (hash != std::string::npos) line = line.substr(0, hash);
    line = trim(line);
    if (line.empty()) continue;
    auto eq = line.find('=');
    if (eq == std::string::npos)
      throw config_error("line " + std::to_string(lineno), "expected 'key = value'");
    std::string key = trim(line.substr(0, eq));
    std::string value = trim(line.substr(eq + 1));
    if (value.empty()) throw config_error(key, "empty value");

    if (key == "experiment") {
      cfg.experiment = kind_from_name(value);
    } else if (key == "kappa") {
      cfg.kappa = parse_numbers(key, value);
    } else if (key == "n_b") {
      cfg.n_b = parse_numbers(key, value);
    } else if (key == "n_s") {
      cfg.n_s = parse_numbers(key, value);
    } else if (key == "m_modes") {
      cfg.m_modes = parse_numbers(key, value);
    } else if (key == "delta") {
      cfg.delta = parse_numbers(key, value);
    } else if (key == "epsilon") {
      cfg.epsilon = parse_numbers(key, value);
    } else if (key == "eta") {
      cfg.eta = parse_numbers(key, value);
    } else if (key == "seed") {
      try {
        cfg.seed = std::stoull(value);
      } catch (const std::exception&) {
        throw config_error(key, "not an unsigned integer: '" + value + "'");
      }
    } else if (key == "mc_samples") {
      try {
        cfg.mc_samples = std::stol(value);
      } catch (const std::exception&) {
        throw config_error(key, "not an integer: '" + value + "'");
      }
    } else if (key == "cycles") {
      try {
        cfg.cycles = std::stoi(value);
      } catch (const std::exception&) {
        throw config_error(key, "not an integer: '" + value + "'");
      }
    } else if (key == "output_dir") {
      cfg.output_dir = value;
    } else {
      throw config_error(key, "unknown key");
    }
  }
  cfg.raw_text = raw.str();
  cfg.validate();
  return cfg;
}

ExperimentConfig ExperimentConfig::parse_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw config_error("config", "cannot open '" + path + "'");
  return parse(in);
}

void ExperimentConfig::validate() const {
  require_range("kappa", kappa, 0.0, 1.0);
  require_range("n_b", n_b, 0.0, 1e300);
  require_range("n_s", n_s, 0.0, 1e300);
  require_range("m_modes", m_modes, 1.0, 1e300);
  require_range("delta", delta, 0.0, 0.5, true, true);
  require_range("epsilon", epsilon, 0.0, 1.0, true, true);
  require_range("eta", eta, 0.0, 1.0, true, false);
  if (mc_samples < 0) throw config_error("mc_samples", "negative");
  if (cycles < 1) throw config_error("cycles", "must be >= 1");
}

std::vector<CurveOutcome> compute_curves(const ExperimentConfig& cfg) {
  cfg.validate();
  switch (cfg.experiment) {
    case ExperimentKind::FIG3_CAPACITY: return curves_fig3(cfg);
    case ExperimentKind::FIG4_COVERT: return curves_fig4(cfg);
    case ExperimentKind::FIG6_RECEIVERS: return curves_receivers(cfg, false);
    case ExperimentKind::FIG7_ERRORPROB: return curves_receivers(cfg, true);
    case ExperimentKind::FIG8_CONTINUOUS: return curves_fig8(cfg);
    case ExperimentKind::FIG9_ADAPTIVE: return curves_fig9(cfg);
    case ExperimentKind::CUSTOM: return curves_custom(cfg);
  }
  throw std::logic_error("unreachable experiment kind");
}

std::uint64_t fnv1a_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot read " + path);
  std::uint64_t h = 0xCBF29CE484222325ULL;
  char buf[1 << 14];
  while (in.read(buf, sizeof buf) || in.gcount() > 0) {
    for (std::streamsize i = 0; i < in.gcount(); ++i)
      h = (h ^ static_cast<unsigned char>(buf[i])) * 0x100000001B3ULL;
    if (in.eof()) break;
  }
  return h;
}

RunOutput run_experiment(const ExperimentConfig& cfg) {
  if (cfg.output_dir.empty()) throw config_error("output_dir", "not set");
  fs::create_directories(cfg.output_dir);
  fs::path dir(cfg.output_dir);

  RunOutput out;
  json manifest;
  manifest["code_version"] = kCodeVersion;
  manifest["experiment"] = kind_name(cfg.experiment);
  manifest["seed"] = cfg.seed;
  manifest["config"] = serialize_config(cfg);
  manifest["outputs"] = json::array();

  auto t_all0 = std::chrono::steady_clock::now();
  std::vector<CurveOutcome> curves = compute_curves(cfg);
  double wall_all =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - t_all0).count();

  for (const CurveOutcome& co : curves) {
    json entry;
    entry["curve"] = co.curve.name;
    if (!co.ok) {
      entry["status"] = "failed";
      entry["error"] = co.error;
      out.all_ok = false;
      manifest["outputs"].push_back(entry);
      continue;
    }
    std::string fname = co.curve.name + ".csv";
    fs::path path = dir / fname;
    atomic_write(path, render_csv(cfg, co.curve, wall_all));
    entry["status"] = "ok";
    entry["file"] = fname;
    char hex[20];
    std::snprintf(hex, sizeof hex, "%016llx",
                  static_cast<unsigned long long>(fnv1a_file(path.string())));
    entry["fnv1a"] = hex;
    entry["monte_carlo"] = co.curve.monte_carlo;
    entry["tolerance_rel"] = co.curve.tolerance_rel;
    entry["stderr_col"] = co.curve.stderr_col;
    manifest["outputs"].push_back(entry);
    out.files.push_back(path.string());
  }

  atomic_write(dir / "plot.py", kPlotTemplate);
  out.files.push_back((dir / "plot.py").string());

  fs::path mpath = dir / "manifest.json";
  atomic_write(mpath, manifest.dump(2) + "\n");
  out.manifest_path = mpath.string();
  return out;
}

VerifyReport verify_manifest(const std::string& manifest_path) {
  VerifyReport rep;
  std::ifstream in(manifest_path);
  if (!in) throw config_error("manifest", "cannot open '" + manifest_path + "'");
  json manifest;
  try {
    in >> manifest;
  } catch (const std::exception& e) {
    throw config_error("manifest", std::string("invalid JSON: ") + e.what());
  }
  fs::path dir = fs::path(manifest_path).parent_path();

  ExperimentConfig cfg;
  {
    std::istringstream cs(manifest.at("config").get<std::string>());
    cfg = ExperimentConfig::parse(cs);
  }
  std::vector<CurveOutcome> fresh = compute_curves(cfg);
  auto find_curve = [&](const std::string& name) -> const CurveOutcome* {
    for (const auto& co : fresh)
      if (co.curve.name == name) return &co;
    return nullptr;
  };

  std::mt19937_64 rng(manifest.value("seed", std::uint64_t(1)) ^ 0xA5A5A5A5ULL);
  for (const auto& entry : manifest.at("outputs")) {
    std::string curve_name = entry.at("curve").get<std::string>();
    if (entry.at("status") != "ok") {
      rep.messages.push_back("curve " + curve_name + ": recorded as failed, skipped");
      continue;
    }
    std::string fname = entry.at("file").get<std::string>();
    fs::path path = dir / fname;
    if (!fs::exists(path)) {
      rep.pass = false;
      rep.messages.push_back(fname + ": missing");
      continue;
    }
    char hex[20];
    std::snprintf(hex, sizeof hex, "%016llx",
                  static_cast<unsigned long long>(fnv1a_file(path.string())));
    if (entry.at("fnv1a").get<std::string>() != hex) {
      rep.stale = true;
      rep.pass = false;
      rep.messages.push_back(fname + ": content hash mismatch (stale or corrupted)");
      continue;
    }
    const CurveOutcome* co = find_curve(curve_name);
    if (!co || !co->ok) {
      rep.pass = false;
      rep.messages.push_back(curve_name + ": re-computation failed");
      continue;
    }
    std::vector<std::vector<double>> stored = parse_csv_rows(path.string());
    if (stored.size() != co->curve.rows.size()) {
      rep.pass = false;
      rep.messages.push_back(fname + ": row count changed");
      continue;
    }
    // spot-check a random >= 1% subsample of the grid points
    std::size_t n_check = std::max<std::size_t>(1, stored.size() / 100);
    double tol = entry.value("tolerance_rel", 1e-12);
    int se_col = entry.value("stderr_col", -1);
    bool mc = entry.value("monte_carlo", false);
    bool ok = true;
    for (std::size_t c = 0; c < n_check && ok; ++c) {
      std::size_t i = rng() % stored.size();
      for (std::size_t j = 0; j < stored[i].size(); ++j) {
        double a = stored[i][j], b = co->curve.rows[i][j];
        double allowed = mc && se_col >= 0
                             ? 3.0 * std::max(stored[i][se_col], 1e-15)
                             : tol * std::max({std::fabs(a), std::fabs(b), 1e-300});
        if (mc && se_col < 0) allowed = std::max(tol * std::fabs(a), 1e-12);
        if (std::fabs(a - b) > allowed) {
          ok = false;
          rep.messages.push_back(fname + ": row " + std::to_string(i) + " col " +
                                 std::to_string(j) + " differs: stored " + format_g17(a) +
                                 " recomputed " + format_g17(b));
          break;
        }
      }
    }
    if (ok)
      rep.messages.push_back(fname + ": ok (" + std::to_string(n_check) + " rows checked)");
    else
      rep.pass = false;
  }
  return rep;
}

std::vector<std::pair<std::string, std::string>> list_experiments() {
  return {
      {"FIG3_CAPACITY", "capacities and phase-encoding Holevo curves vs n_s"},
      {"FIG4_COVERT", "covert mode budget and bit totals vs n_s"},
      {"FIG6_RECEIVERS", "receiver rate / classical capacity vs block size M"},
      {"FIG7_ERRORPROB", "receiver error probabilities vs M (bound + Monte Carlo)"},
      {"FIG8_CONTINUOUS", "continuous-encoding rate and repetition benchmark vs M"},
      {"FIG9_ADAPTIVE", "adaptive-estimation variance traces"},
      {"CUSTOM", "capacity report over the full (kappa, n_b, n_s) grid"},
  };
}

}  // namespace ealab
