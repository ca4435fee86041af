#pragma once
// Practical BPSK receivers on M-mode repetition blocks: OPA, phase-conjugate,
// and feed-forward SFG (analytic Helstrom bound plus Monte Carlo), with the
// storage/detector imperfection model.
#include "ealab/gaussian.hpp"
#include "ealab/phase_holevo.hpp"

#include <cstdint>
#include <optional>

namespace ealab {

struct OpaConfig {
  double gain;        // G >= 1
  double block_size;  // M >= 1 (double: M reaches 1e9+)
  ChannelParams ch;
};

struct ImperfectionModel {
  double kappa_i;  // idler storage+filter efficiency, (0,1]
  double kappa_s;  // signal excess efficiency, (0,1]
  double eta_d;    // detector efficiency, (0,1]
};

struct SfgConfig {
  double eta = 4e-6;          // tap fraction per cycle
  int cycles = 50;            // K
  double epsilon = 0.025;     // residual correlation fraction
  long samples = 100000;      // Monte Carlo sample count
  std::uint64_t seed = 1;
  // per-cycle correlation-energy depletion factor; <= 0 selects the geometric
  // law epsilon^(1/K) that burns the correlation down to the residual epsilon
  double depletion_factor = 0.0;
};

enum class RxMethod { OPA, PCR, SFG_BOUND, SFG_MC };

struct DiscriminationResult {
  double p_error;          // in [0, 0.5]
  double rate_per_mode;    // bits, from the binary-channel rate formula
  RxMethod method;
  std::optional<double> mc_stderr;
};

double opa_optimal_gain(const ChannelParams& ch);  // G = 1 + sqrt(n_s)/n_b
double opa_optimal_gain(const ChannelParams& ch, const ImperfectionModel& imp);

// mean photon count per mode at the OPA output, Eq.-level model
double opa_mean_photon(double theta, const OpaConfig& cfg,
                       const std::optional<ImperfectionModel>& imp = std::nullopt);

// total-count pmf across the block: negative binomial with M failures
PhotonDistribution opa_count_pmf(double theta, const OpaConfig& cfg, int n_max);
double opa_count_log_pmf(double n, double theta, const OpaConfig& cfg);

DiscriminationResult opa_error_prob(const OpaConfig& cfg,
                                    const std::optional<ImperfectionModel>& imp = std::nullopt);

DiscriminationResult pcr_error_prob(double m_modes, const ChannelParams& ch);

// Helstrom bound for the SFG receiver, numerically evaluated on the effective
// noisy displaced-thermal states (tracks the receiver's actual limit)
DiscriminationResult sfg_helstrom_bound(double m_modes, const ChannelParams& ch,
                                        double epsilon);
// pure-coherent-state closed form, valid for n_s << 1 (asymptotics only)
double sfg_helstrom_pure(double m_modes, const ChannelParams& ch);

// Monte Carlo of the feed-forward SFG receiver; true_theta is 0 or pi
DiscriminationResult sfg_simulate(const SfgConfig& cfg, double m_modes,
                                  const ChannelParams& ch, double true_theta);

// per-mode rate of a binary symmetric channel with error p, Eq.-level formula
double rate_from_error(double p_error, double m_modes);

// kappa_i * eta_d product at which the OPA rate crosses the classical capacity
double imperfection_threshold(double m_modes, const ChannelParams& ch);

}  // namespace ealab
