#include "ealab/estimation.hpp"

#include "ealab/kernels.hpp"
#include "ealab/special_fn.hpp"

#include <cmath>
#include <limits>
#include <random>

namespace ealab {

Posterior Posterior::uniform(int grid_size) {
  Posterior p;
  p.grid_size = grid_size;
  p.log_density.assign(grid_size, -std::log(2.0 * M_PI));
  return p;
}

void Posterior::normalize() {
  double lse = kernels::logsumexp(log_density.data(), log_density.size());
  if (!std::isfinite(lse))
    throw std::runtime_error("Posterior::normalize: degenerate (all-zero) posterior");
  double shift = lse + std::log(bin_width());  // integral -> 1
  for (double& v : log_density) v -= shift;
}

double Posterior::density(int i) const { return std::exp(log_density[i]); }

int Posterior::argmax() const {
  int best = 0;
  for (int i = 1; i < grid_size; ++i)
    if (log_density[i] > log_density[best]) best = i;
  return best;
}

double Posterior::circular_variance() const {
  double cx = 0.0, sx = 0.0;
  for (int i = 0; i < grid_size; ++i) {
    double w = density(i);
    cx += w * std::cos(theta_at(i));
    sx += w * std::sin(theta_at(i));
  }
  double r = std::sqrt(cx * cx + sx * sx) * bin_width();
  r = std::min(r, 1.0);
  // -2 ln R: agrees with the linear variance for concentrated posteriors,
  // which keeps the Cramer-Rao comparison meaningful
  if (r <= 0.0) return std::numeric_limits<double>::infinity();
  return -2.0 * std::log(r);
}

std::pair<double, double> Posterior::second_moment() const {
  double cx = 0.0, sx = 0.0;
  for (int i = 0; i < grid_size; ++i) {
    double w = density(i);
    cx += w * std::cos(2.0 * theta_at(i));
    sx += w * std::sin(2.0 * theta_at(i));
  }
  cx *= bin_width();
  sx *= bin_width();
  return {std::sqrt(cx * cx + sx * sx), std::atan2(sx, cx)};
}

Schedule Schedule::uniform(double m_total, int cycles, ShiftStrategy s) {
  Schedule sc;
  sc.strategy = s;
  sc.slices.assign(cycles, m_total / cycles);
  return sc;
}

double qfi_upper_bound(const ChannelParams& ch) {
  ch.validate();
  if (ch.kappa >= 1.0) throw std::domain_error("qfi_upper_bound: requires kappa < 1");
  const double k = ch.kappa, nb = ch.n_b, ns = ch.n_s;
  double num = 4.0 * k * ns * (k * ns + (1.0 - k) * nb + 1.0);
  double den = (1.0 - k) * (k * ns * (2.0 * nb + 1.0) - k * nb * (nb + 1.0) +
                            (nb + 1.0) * (nb + 1.0));
  return num / den;
}

double qfi_tmsv(const ChannelParams& ch) {
  ch.validate();
  return 4.0 * ch.kappa * ch.n_s * (ch.n_s + 1.0) /
         (1.0 + ch.n_b * (1.0 + 2.0 * ch.n_s) + ch.n_s * (1.0 - ch.kappa));
}

double qfi_coherent(const ChannelParams& ch) {
  ch.validate();
  return 4.0 * ch.kappa * ch.n_s / (1.0 + 2.0 * ch.n_b);
}

double opa_fisher(double theta, double gain, double m_modes, const ChannelParams& ch) {
  OpaConfig cfg{gain, m_modes, ch};
  double nbar = opa_mean_photon(theta, cfg);
  double s = std::sin(theta);
  return 4.0 * (gain - 1.0) * gain * m_modes * ch.kappa * ch.n_s * (1.0 + ch.n_s) *
         s * s / (nbar * (1.0 + nbar));
}

Posterior bayes_update(const Posterior& post, double n_observed, double m_k,
                       double delta_theta, double gain, const ChannelParams& ch) {
  Posterior out = post;
  OpaConfig cfg{gain, m_k, ch};
  // log-likelihood up to a theta-independent constant:
  // n log nbar - (n + M) log(1 + nbar)
  for (int i = 0; i < out.grid_size; ++i) {
    double nbar = opa_mean_photon(out.theta_at(i) + delta_theta, cfg);
    double ll = (nbar > 0.0)
                    ? n_observed * std::log(nbar) - (n_observed + m_k) * std::log1p(nbar)
                    : (n_observed == 0.0 ? 0.0 : -std::numeric_limits<double>::infinity());
    out.log_density[i] += ll;
  }
  out.normalize();
  return out;
}

double choose_phase_shift(const Posterior& post, ShiftStrategy strategy) {
  if (strategy == ShiftStrategy::MAX_FISHER)
    return M_PI / 2.0 - post.theta_at(post.argmax());
  // Van Trees-flavored objective: maximize the posterior variance of the
  // interference signal cos(theta + d),
  //   Var[cos(theta+d)] = 1/2 - R1^2/2 + Re(e^{2id} Z)/2,
  //   Z = R2 e^{i phi2} - R1^2 e^{2 i phi1}.
  // For a concentrated posterior this is sigma^2 sin^2(mu + d), the posterior-
  // averaged Fisher criterion; unlike the bare average-Fisher objective it
  // also separates the two branches of a reflection-ambiguous (theta vs
  // -theta) posterior instead of parking them on a symmetric operating point.
  double c1 = 0.0, s1 = 0.0, c2 = 0.0, s2 = 0.0;
  for (int i = 0; i < post.grid_size; ++i) {
    double w = post.density(i) * post.bin_width();
    double th = post.theta_at(i);
    c1 += w * std::cos(th);
    s1 += w * std::sin(th);
    c2 += w * std::cos(2.0 * th);
    s2 += w * std::sin(2.0 * th);
  }
  double zr = c2 - (c1 * c1 - s1 * s1);
  double zi = s2 - 2.0 * c1 * s1;
  if (std::hypot(zr, zi) < 1e-12) return 0.0;  // uniform posterior: flat objective
  // maximized where 2d + arg(Z) = 0
  return -0.5 * std::atan2(zi, zr);
}

namespace {

std::uint64_t mix64(std::uint64_t x) {
  x += 0x9E3779B97F4A7C15ULL;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
  return x ^ (x >> 31);
}

// negative-binomial draw via the gamma-Poisson mixture; exact for any M
double sample_opa_count(double nbar, double m_modes, std::mt19937_64& rng) {
  std::gamma_distribution<double> gamma(m_modes, nbar);
  std::poisson_distribution<long long> pois(std::max(gamma(rng), 1e-300));
  return double(pois(rng));
}

}  // namespace

EstimationResult run_adaptive_estimation(const Schedule& schedule, const ChannelParams& ch,
                                         double gain, double true_theta,
                                         std::uint64_t seed, int grid_size) {
  if (schedule.slices.empty()) throw std::domain_error("run_adaptive_estimation: empty schedule");
  double m_total = 0.0;
  for (double m : schedule.slices) m_total += m;
  std::mt19937_64 rng(mix64(seed));
  Posterior post = Posterior::uniform(grid_size);
  EstimationResult res;
  res.seed = seed;
  OpaConfig base{gain, 1.0, ch};
  double used = 0.0;
  for (double m_k : schedule.slices) {
    double dtheta = choose_phase_shift(post, schedule.strategy);
    base.block_size = m_k;
    double nbar_true = opa_mean_photon(true_theta + dtheta, base);
    double n_obs = sample_opa_count(nbar_true, m_k, rng);
    post = bayes_update(post, n_obs, m_k, dtheta, gain, ch);
    used += m_k;
    res.variance_trace.emplace_back(used / m_total, post.circular_variance());
  }
  res.estimate = post.theta_at(post.argmax());
  return res;
}

double continuous_rate(const Eigen::MatrixXd& channel_density, double m_modes) {
  const int n_theta = channel_density.rows(), n_est = channel_density.cols();
  const double w_est = 2.0 * M_PI / n_est;
  double integral = 0.0;
  for (int i = 0; i < n_theta; ++i) {
    double row_mass = 0.0, row_term = 0.0;
    for (int j = 0; j < n_est; ++j) {
      double p = channel_density(i, j);
      if (p < 0.0) throw std::domain_error("continuous_rate: negative density");
      row_mass += p * w_est;
      if (p > 0.0) row_term += p * std::log2(p) * w_est;
    }
    if (std::fabs(row_mass - 1.0) > 1e-6)
      throw std::domain_error("continuous_rate: row not normalized");
    integral += row_term / n_theta;  // d theta / 2pi
  }
  return (std::log2(2.0 * M_PI) + integral) / m_modes;
}

}  // namespace ealab
