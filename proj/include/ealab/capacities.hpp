#pragma once
// Closed-form rates for the thermal-loss channel, all in bits per mode.
#include "ealab/gaussian.hpp"

#include <utility>

namespace ealab {

struct CapacityReport {
  double c_classical;
  double c_ea;
  double c_hom;
  double c_het;
  double ratio_ea;  // c_ea / c_classical
  ChannelParams params;
};

// g(kappa n_s + n_b) - g(n_b), evaluated in a cancellation-free form
// (the naive difference loses ~7 digits at kappa n_s ~ 1e-6, n_b ~ 1e4)
double classical_capacity(const ChannelParams& ch);

// (C_hom, C_het)
std::pair<double, double> homodyne_heterodyne_rates(const ChannelParams& ch);

double ea_capacity(const ChannelParams& ch);

// large-noise limit of C_E / C: (1 + n_s) ln(1 + 1/n_s)
double ea_ratio_limit(double n_s);

// EA rate when the entanglement itself crossed a loss kappa0 first:
// channel (kappa0*kappa, n_b) fed with power n_s/kappa0
double preshared_loss_rate(double kappa0, const ChannelParams& ch);

CapacityReport capacity_report(const ChannelParams& ch);

}  // namespace ealab
