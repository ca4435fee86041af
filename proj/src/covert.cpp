#include "ealab/covert.hpp"

#include "ealab/capacities.hpp"

#include <cmath>
#include <limits>

namespace ealab {

std::pair<double, double> env_means(const ChannelParams& ch) {
  ch.validate();
  if (ch.kappa >= 1.0) throw std::domain_error("env_means: no environment port at kappa = 1");
  double n0 = ch.kappa * ch.n_b / (1.0 - ch.kappa);
  return {n0, n0 + (1.0 - ch.kappa) * ch.n_s};
}

double adversary_chernoff_error(double n_modes, const ChannelParams& ch) {
  ch.validate();
  if (n_modes < 0.0) throw std::domain_error("adversary_chernoff_error: negative N");
  double knb = ch.kappa * ch.n_b;
  if (knb == 0.0) return n_modes == 0.0 || ch.n_s == 0.0 ? 0.5 : 0.0;
  double expo = n_modes * ch.n_s * ch.n_s / (8.0 * knb * knb);
  return std::min(0.5 * std::exp(-expo), 0.5);
}

double thermal_relative_entropy(double n0, double n1) {
  if (n0 < 0.0 || n1 < 0.0) throw std::domain_error("thermal_relative_entropy: negative mean");
  if (n0 == n1) return 0.0;
  if (n1 == 0.0) return std::numeric_limits<double>::infinity();  // support mismatch
  if (n0 == 0.0) return std::log2(n1 + 1.0);  // the n0 log(...) term vanishes
  // log2[(n1+1)/(n0+1)] + n0 log2[n0(n1+1)/(n1(n0+1))], in cancellation-safe form:
  // both logs written against the small difference d = n1 - n0
  double d = n1 - n0;
  double t1 = std::log1p(d / (n0 + 1.0));
  double t2 = std::log1p(d / (n0 + 1.0)) - std::log1p(d / n0);
  return (t1 + n0 * t2) / std::log(2.0);
}

double covert_mode_budget(double delta, const ChannelParams& ch) {
  if (!(delta >= 0.0 && delta < 0.5)) throw std::domain_error("covert_mode_budget: delta outside [0,0.5)");
  if (delta == 0.0) return 0.0;
  auto [n0, n1] = env_means(ch);
  double d_bits = thermal_relative_entropy(n0, n1);
  if (d_bits == 0.0) return std::numeric_limits<double>::infinity();
  // N * D(rho0||rho1) <= 2 delta^2 / ln 2; D is additive over modes so the
  // constraint is linear in N and the solve is exact
  return 2.0 * delta * delta / (std::log(2.0) * d_bits);
}

double covert_mode_budget_closed_form(double delta, const ChannelParams& ch) {
  auto [n0, n1] = env_means(ch);
  double diff = n1 - n0;
  if (diff == 0.0) return std::numeric_limits<double>::infinity();
  return 4.0 * delta * delta * n0 * (n0 + 1.0) / (diff * diff);
}

CovertBudget covert_bits(double delta, const ChannelParams& ch) {
  CovertBudget b;
  b.delta = delta;
  b.n_modes_max = covert_mode_budget(delta, ch);
  b.bits_classical = b.n_modes_max * classical_capacity(ch);
  b.bits_ea = b.n_modes_max * ea_capacity(ch);
  return b;
}

}  // namespace ealab
