#include "ealab/receivers.hpp"

#include "ealab/capacities.hpp"
#include "ealab/special_fn.hpp"

#include <Eigen/Eigenvalues>

#include <cmath>
#include <limits>
#include <random>

namespace ealab {

namespace {

double cross_amplitude(const ChannelParams& ch) {  // C_p
  return std::sqrt(ch.kappa) * std::sqrt(ch.n_s * (ch.n_s + 1.0));
}

void validate_imp(const ImperfectionModel& imp) {
  auto in01 = [](double v) { return v > 0.0 && v <= 1.0; };
  if (!in01(imp.kappa_i) || !in01(imp.kappa_s) || !in01(imp.eta_d))
    throw std::domain_error("ImperfectionModel: efficiencies must lie in (0,1]");
}

}  // namespace

double opa_optimal_gain(const ChannelParams& ch) {
  return 1.0 + std::sqrt(ch.n_s) / ch.n_b;
}

double opa_optimal_gain(const ChannelParams& ch, const ImperfectionModel& imp) {
  validate_imp(imp);
  return 1.0 + std::sqrt(imp.kappa_i * ch.n_s) / (imp.kappa_s * ch.n_b);
}

double opa_mean_photon(double theta, const OpaConfig& cfg,
                       const std::optional<ImperfectionModel>& imp) {
  if (cfg.gain < 1.0) throw std::domain_error("opa_mean_photon: gain must be >= 1");
  cfg.ch.validate();
  const double g = cfg.gain, cp = cross_amplitude(cfg.ch);
  const ChannelParams& ch = cfg.ch;
  if (!imp) {
    return g * ch.n_s + (g - 1.0) * (ch.kappa * ch.n_s + ch.n_b + 1.0) +
           2.0 * std::sqrt(g * (g - 1.0)) * std::cos(theta) * cp;
  }
  validate_imp(*imp);
  return imp->eta_d *
         (g * imp->kappa_i * ch.n_s +
          (g - 1.0) * (imp->kappa_s * ch.kappa * ch.n_s + imp->kappa_s * ch.n_b + 1.0) +
          2.0 * std::sqrt(g * (g - 1.0)) * std::cos(theta) *
              std::sqrt(imp->kappa_i * imp->kappa_s) * cp);
}

double opa_count_log_pmf(double n, double theta, const OpaConfig& cfg) {
  const double nbar = opa_mean_photon(theta, cfg);
  const double m = cfg.block_size;
  if (nbar == 0.0) return n == 0.0 ? 0.0 : -std::numeric_limits<double>::infinity();
  // negative binomial: C(n+M-1, n) (nbar/(1+nbar))^n (1/(1+nbar))^M
  return log_gamma(n + m) - log_gamma(m) - log_gamma(n + 1.0) +
         n * std::log(nbar / (1.0 + nbar)) - m * std::log1p(nbar);
}

PhotonDistribution opa_count_pmf(double theta, const OpaConfig& cfg, int n_max) {
  PhotonDistribution out;
  out.n1_size = n_max + 1;
  out.pmf.resize(out.n1_size);
  for (int n = 0; n <= n_max; ++n)
    out.pmf[n] = std::exp(opa_count_log_pmf(n, theta, cfg));
  out.truncation = {n_max, out.mass()};
  if (out.truncation.captured_mass < 1.0 - 1e-9)
    throw std::runtime_error("opa_count_pmf: truncation mass below 1 - 1e-9");
  return out;
}

double rate_from_error(double p_error, double m_modes) {
  if (!(p_error >= 0.0 && p_error <= 1.0))
    throw std::domain_error("rate_from_error: p outside [0,1]");
  auto xlog2x = [](double x) { return x > 0.0 ? x * std::log2(x) : 0.0; };
  return (1.0 + xlog2x(p_error) + xlog2x(1.0 - p_error)) / m_modes;
}

namespace {

DiscriminationResult from_erfc_arg(double arg, double m_modes, RxMethod method) {
  double p = 0.5 * erfc(arg);
  return {p, rate_from_error(p, m_modes), method, std::nullopt};
}

double opa_erfc_arg_ideal(const OpaConfig& cfg) {
  double n0 = opa_mean_photon(0.0, cfg);
  double npi = opa_mean_photon(M_PI, cfg);
  double mu = std::fabs(n0 - npi);
  double sigma = std::sqrt(n0 * (1.0 + n0)) + std::sqrt(npi * (1.0 + npi));
  return std::sqrt(cfg.block_size * mu * mu / (2.0 * sigma * sigma));
}

}  // namespace

DiscriminationResult opa_error_prob(const OpaConfig& cfg,
                                    const std::optional<ImperfectionModel>& imp) {
  double arg = opa_erfc_arg_ideal(cfg);
  if (imp) {
    validate_imp(*imp);
    arg *= std::sqrt(imp->kappa_i * imp->eta_d);
  }
  return from_erfc_arg(arg, cfg.block_size, RxMethod::OPA);
}

DiscriminationResult pcr_error_prob(double m_modes, const ChannelParams& ch) {
  ch.validate();
  const double cp = cross_amplitude(ch);
  const double ni = ch.n_s, nc = ch.kappa * ch.n_s + ch.n_b + 1.0;
  // difference detector: means +-2 C_p, arm variances sigma_+^2 = sigma_-^2
  const double sig2 = (nc + ni) + 2.0 * nc * ni + 2.0 * cp * cp;
  const double mu = 4.0 * cp;
  const double sigma = 2.0 * std::sqrt(sig2);
  double arg = (mu == 0.0) ? 0.0
                           : std::sqrt(m_modes * mu * mu / (2.0 * sigma * sigma));
  return from_erfc_arg(arg, m_modes, RxMethod::PCR);
}

double sfg_helstrom_pure(double m_modes, const ChannelParams& ch) {
  double e = std::exp(-4.0 * m_modes * ch.kappa * ch.n_s / ch.n_b);
  return 0.5 * (1.0 - std::sqrt(1.0 - e));
}

namespace {

// effective post-SFG coherent energy and per-block thermal noise
void sfg_effective_state(double m_modes, const ChannelParams& ch, double epsilon,
                         double* amp2, double* n_e) {
  *amp2 = (1.0 - epsilon) * m_modes * ch.kappa * ch.n_s * (ch.n_s + 1.0) /
          (ch.n_b + 1.0);
  *n_e = -ch.n_s * std::log(epsilon) / 2.0;
}

}  // namespace

DiscriminationResult sfg_helstrom_bound(double m_modes, const ChannelParams& ch,
                                        double epsilon) {
  ch.validate();
  if (!(epsilon > 0.0 && epsilon < 1.0))
    throw std::domain_error("sfg_helstrom_bound: epsilon must lie in (0,1)");
  double amp2, n_e;
  sfg_effective_state(m_modes, ch, epsilon, &amp2, &n_e);
  const double mean = amp2 + n_e;
  const double var = amp2 * (1.0 + 2.0 * n_e) + n_e * (1.0 + n_e);
  const int dim = std::max(24, int(std::ceil(mean + 14.0 * std::sqrt(var) + 20.0)));
  // rho(theta=0) - rho(theta=pi); elements are real, theta=pi flips odd m-n
  Eigen::MatrixXd delta(dim, dim);
  for (int n = 0; n < dim; ++n)
    for (int m = n; m < dim; ++m) {
      double el = dts_fock_element({amp2, 0.0, n_e}, n, m).real();
      double v = ((m - n) % 2 == 0) ? 0.0 : 2.0 * el;
      delta(n, m) = v;
      delta(m, n) = v;
    }
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(delta, Eigen::EigenvaluesOnly);
  double trace_norm = es.eigenvalues().cwiseAbs().sum();
  double p = std::clamp(0.5 * (1.0 - 0.5 * trace_norm), 0.0, 0.5);
  return {p, rate_from_error(p, m_modes), RxMethod::SFG_BOUND, std::nullopt};
}

namespace {

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9E3779B97F4A7C15ULL;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
  return x ^ (x >> 31);
}

// inverse-CDF draw from the displaced-thermal photon pmf (means here are << 1)
int sample_dts_count(double amp2, double n_e, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> uni(0.0, 1.0);
  double u = uni(rng), cdf = 0.0;
  for (int n = 0; n < 100000; ++n) {
    cdf += std::exp(dts_log_pmf(n, amp2, n_e));
    if (u <= cdf) return n;
  }
  return 100000;
}

}  // namespace

DiscriminationResult sfg_simulate(const SfgConfig& cfg, double m_modes,
                                  const ChannelParams& ch, double true_theta) {
  ch.validate();
  if (!(cfg.eta > 0.0 && cfg.eta < 1.0) || !(cfg.epsilon > 0.0 && cfg.epsilon < 1.0) ||
      cfg.cycles < 1 || cfg.samples < 1)
    throw std::domain_error("sfg_simulate: invalid config");
  const int h_true = (std::fabs(true_theta) < 1e-12) ? 0 : 1;
  const int K = cfg.cycles;

  // per-segment coherent energies of the sum-frequency mode
  const double c0sq = ch.kappa * ch.n_s * (ch.n_s + 1.0) / (ch.n_b + 1.0);
  std::vector<double> seg(K), ecum(K);
  double noise_cyc;  // sum-port thermal noise per cycle
  if (cfg.depletion_factor > 0.0) {
    // user-supplied amplitude depletion per cycle; tap eta of the remaining energy
    double f2 = cfg.depletion_factor * cfg.depletion_factor;
    for (int k = 0; k < K; ++k) seg[k] = 4.0 * cfg.eta * m_modes * c0sq * std::pow(f2, k);
    noise_cyc = cfg.eta * ch.n_s * ch.n_b;
  } else {
    // geometric law that burns the correlation down to the residual epsilon;
    // every cycle taps the same fraction of what remains, so the conversion
    // noise is uniform and totals the effective model's -n_s ln(eps)/2
    double d = std::pow(cfg.epsilon, 1.0 / K);
    for (int k = 0; k < K; ++k)
      seg[k] = m_modes * c0sq * std::pow(d, k) * (1.0 - d);
    noise_cyc = -ch.n_s * std::log(cfg.epsilon) / (2.0 * K);
  }
  double acc = 0.0;
  for (int k = 0; k < K; ++k) ecum[k] = (acc += seg[k]);

  long errors = 0;
  for (long s = 0; s < cfg.samples; ++s) {
    std::mt19937_64 rng(splitmix64(cfg.seed ^ (0xA076'1D64'78BD'642FULL * (s + 1))));
    double logp[2] = {std::log(0.5), std::log(0.5)};
    for (int k = 0; k < K; ++k) {
      const double a = std::sqrt(seg[k]);
      const int h_ml = (logp[1] > logp[0]) ? 1 : 0;
      const double e_mid = (k > 0 ? ecum[k - 1] : 0.0) + seg[k] / 2.0;
      const double denom = std::sqrt(-std::expm1(-4.0 * e_mid));
      const double rk = (h_ml == 0 ? 1.0 : -1.0) * a / std::max(denom, 1e-9);
      const double mean0 = (a - rk) * (a - rk);
      const double mean1 = (-a - rk) * (-a - rk);
      const double mean_true = (h_true == 0) ? mean0 : mean1;
      int n_sum = sample_dts_count(mean_true, noise_cyc, rng);
      // thermal port: sampled for the determinism contract, but its statistics
      // are hypothesis-independent under the effective model, so it carries no
      // likelihood weight (double-counting it would beat the Helstrom bound)
      (void)sample_dts_count(0.0, mean_true, rng);
      logp[0] += dts_log_pmf(n_sum, mean0, noise_cyc);
      logp[1] += dts_log_pmf(n_sum, mean1, noise_cyc);
      double mx = std::max(logp[0], logp[1]);
      logp[0] -= mx;
      logp[1] -= mx;
    }
    int decision = (logp[1] > logp[0]) ? 1 : 0;
    if (decision != h_true) ++errors;
  }
  double p = double(errors) / double(cfg.samples);
  double se = std::sqrt(std::max(p * (1.0 - p), 1e-300) / double(cfg.samples));
  return {std::min(p, 0.5), rate_from_error(std::min(p, 0.5), m_modes),
          RxMethod::SFG_MC, se};
}

double imperfection_threshold(double m_modes, const ChannelParams& ch) {
  OpaConfig cfg{opa_optimal_gain(ch), m_modes, ch};
  const double arg_ideal = opa_erfc_arg_ideal(cfg);
  const double target = classical_capacity(ch);
  auto rate_at = [&](double x) {
    return rate_from_error(0.5 * erfc(arg_ideal * std::sqrt(x)), m_modes);
  };
  if (rate_at(1.0) < target)
    throw std::runtime_error("imperfection_threshold: never advantageous in (0,1]");
  if (rate_at(1e-12) > target)
    throw std::runtime_error("imperfection_threshold: always advantageous in (0,1]");
  double lo = 1e-12, hi = 1.0;
  for (int i = 0; i < 200; ++i) {
    double mid = 0.5 * (lo + hi);
    (rate_at(mid) > target ? hi : lo) = mid;
  }
  return 0.5 * (lo + hi);
}

}  // namespace ealab
