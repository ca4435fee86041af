#pragma once
// Noisy phase estimation: QFI closed forms, OPA Fisher information, and the
// feed-forward Bayesian estimator (max-Fisher / Van Trees phase shifts).
#include "ealab/gaussian.hpp"
#include "ealab/receivers.hpp"

#include <cmath>
#include <cstdint>
#include <utility>
#include <vector>

namespace ealab {

struct Posterior {
  int grid_size;                    // power of two
  std::vector<double> log_density;  // over [0, 2pi), periodic
  bool log_space = true;

  static Posterior uniform(int grid_size = 4096);
  double bin_width() const { return 2.0 * M_PI / grid_size; }
  double theta_at(int i) const { return i * bin_width(); }
  void normalize();                          // logsumexp-normalized density
  double density(int i) const;               // linear-space density (1/rad)
  int argmax() const;
  double circular_variance() const;          // -2 ln R of the first moment
  std::pair<double, double> second_moment() const;  // (R2, phi2) of e^{2 i theta}
};

enum class ShiftStrategy { MAX_FISHER, VAN_TREES };

struct Schedule {
  std::vector<double> slices;  // M_k, sum = M
  ShiftStrategy strategy = ShiftStrategy::VAN_TREES;

  static Schedule uniform(double m_total, int cycles, ShiftStrategy s);
};

struct EstimationResult {
  double estimate;  // in [0, 2pi)
  std::vector<std::pair<double, double>> variance_trace;  // (progress, circ. variance)
  std::uint64_t seed;
};

double qfi_upper_bound(const ChannelParams& ch);  // requires kappa < 1
double qfi_tmsv(const ChannelParams& ch);
double qfi_coherent(const ChannelParams& ch);

// classical Fisher information of the M-mode OPA photon counter at phase theta
double opa_fisher(double theta, double gain, double m_modes, const ChannelParams& ch);

// multiply the posterior by the OPA count likelihood at shifted phase
Posterior bayes_update(const Posterior& post, double n_observed, double m_k,
                       double delta_theta, double gain, const ChannelParams& ch);

double choose_phase_shift(const Posterior& post, ShiftStrategy strategy);

EstimationResult run_adaptive_estimation(const Schedule& schedule, const ChannelParams& ch,
                                         double gain, double true_theta,
                                         std::uint64_t seed, int grid_size = 4096);

// per-mode rate from a discretized conditional density P(theta_hat | theta);
// rows are true-theta bins, columns estimate bins, entries in 1/rad
double continuous_rate(const Eigen::MatrixXd& channel_density, double m_modes);

}  // namespace ealab
