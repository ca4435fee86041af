#pragma once
// Covertness budget: environment-state photon numbers, adversary error
// estimate, relative-entropy constraint, and covert-bit totals.
#include "ealab/gaussian.hpp"

#include <utility>

namespace ealab {

struct CovertBudget {
  double delta;
  double n_modes_max;  // N_delta
  double bits_classical;
  double bits_ea;
};

// thermal means seen by the adversary: (n0, n1) with
// n0 = kappa n_b/(1-kappa), n1 = n0 + (1-kappa) n_s; requires kappa < 1
std::pair<double, double> env_means(const ChannelParams& ch);

// quantum Chernoff-style estimate (an estimate, not a bound):
// exp(-N n_s^2 / (8 kappa^2 n_b^2)) / 2, capped at 1/2
double adversary_chernoff_error(double n_modes, const ChannelParams& ch);

// D(thermal(n0) || thermal(n1)) in bits; +inf signaled via the return value
double thermal_relative_entropy(double n0, double n1);

// largest N with N * D <= 2 delta^2 / ln 2 (exact; D is per-mode additive)
double covert_mode_budget(double delta, const ChannelParams& ch);

// leading-order closed form 4 delta^2 n0 (n0+1) / (n1-n0)^2, for cross-checks
double covert_mode_budget_closed_form(double delta, const ChannelParams& ch);

CovertBudget covert_bits(double delta, const ChannelParams& ch);

}  // namespace ealab
