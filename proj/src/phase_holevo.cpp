#include "ealab/phase_holevo.hpp"

#include "ealab/kernels.hpp"
#include "ealab/special_fn.hpp"

#include <Eigen/Eigenvalues>

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

namespace ealab {

double PhotonDistribution::mass() const {
  return std::accumulate(pmf.begin(), pmf.end(), 0.0);
}

double PhotonDistribution::mean() const {
  double m = 0.0;
  for (std::size_t i = 0; i < pmf.size(); ++i) m += (n_offset + double(i)) * pmf[i];
  return m;
}

double PhotonDistribution::entropy_bits() const {
  return kernels::entropy_bits(pmf.data(), pmf.size());
}

namespace {

// channel-output parameters of the Appendix-level closed forms
struct ElementContext {
  double C, E, S, X, Y, W, z;
  bool correlated;  // C > 0
  bool pure_loss;   // n_b = 0: Y = -4 n_b (1 + n_s) vanishes, use the exact branch
};

ElementContext make_context(const ChannelParams& ch) {
  ElementContext c;
  double cp = std::sqrt(ch.kappa) * std::sqrt(ch.n_s * (ch.n_s + 1.0));
  c.C = 2.0 * cp;
  c.E = 1.0 + 2.0 * (ch.n_b + ch.kappa * ch.n_s);
  c.S = 1.0 + 2.0 * ch.n_s;
  c.X = 1.0 + c.C * c.C + c.E - (1.0 + c.E) * c.S;
  c.Y = c.C * c.C - (c.E - 1.0) * (c.S + 1.0);
  c.W = -1.0 + c.C * c.C + c.E + c.S - c.E * c.S;
  c.correlated = c.C > 0.0;
  c.pure_loss = ch.n_b == 0.0;
  c.z = (c.C == 0.0 || c.pure_loss) ? 0.0 : 4.0 * c.C * c.C / (c.X * c.Y);
  if (!(c.z >= 0.0 && c.z < 1.0))
    throw std::domain_error("joint_fock_element: hypergeometric argument outside [0,1)");
  return c;
}

// n_b = 0: the environment stays in vacuum, so the idler photon number pins
// the number of lost photons and the Kraus sum collapses to a single term:
//   <n1 n2|rho|n1' n2'> = (1+n_s)^{-1} lam^{n2+n2'} sqrt(C(n2,k) C(n2',k))
//                         (1-kappa)^k kappa^{(n1+n1')/2},  k = n2 - n1 >= 0
// with lam = sqrt(n_s/(1+n_s)).
double pure_loss_element(int n1, int n2, int n1p, int n2p, const ChannelParams& ch) {
  const int k = n2 - n1;
  if (k < 0 || n2p - n1p != k) return 0.0;
  double lam2 = ch.n_s / (1.0 + ch.n_s);
  double log_mag = -std::log1p(ch.n_s) + 0.5 * (n2 + n2p) * std::log(lam2) +
                   0.5 * (log_gamma(n2 + 1.0) + log_gamma(n2p + 1.0) -
                          log_gamma(n1 + 1.0) - log_gamma(n1p + 1.0)) -
                   log_gamma(k + 1.0);
  return std::exp(log_mag) * std::pow(1.0 - ch.kappa, k) *
         std::pow(ch.kappa, 0.5 * (n1 + n1p));
}

double log_thermal_pmf(int n, double nbar) {
  if (nbar == 0.0) return n == 0 ? 0.0 : -std::numeric_limits<double>::infinity();
  return n * std::log(nbar / (1.0 + nbar)) - std::log1p(nbar);
}

int parity_sign(long long p) { return (p % 2 == 0) ? 1 : -1; }

double element_impl(int n1, int n2, int n1p, int n2p, const ChannelParams& ch,
                    const ElementContext& c) {
  if (n1 - n1p != n2 - n2p) return 0.0;
  if (n1 < 0 || n2 < 0 || n1p < 0 || n2p < 0) return 0.0;
  if (n2 < n2p) {  // the matrix is real symmetric; evaluate the upper form
    std::swap(n1, n1p);
    std::swap(n2, n2p);
  }
  const int d = n2 - n2p;
  if (!c.correlated) {  // product of thermal states
    if (d != 0 || n1 != n1p) return 0.0;
    return std::exp(log_thermal_pmf(n1, ch.kappa * ch.n_s + ch.n_b) +
                    log_thermal_pmf(n2, ch.n_s));
  }
  if (c.pure_loss) return pure_loss_element(n1, n2, n1p, n2p, ch);
  double log_f = log_gauss_2f1_regularized(1 + n1, 1 + n2, 1 + d, c.z);
  double log_mag = 0.5 * (log_gamma(n1 + 1.0) + log_gamma(n2 + 1.0) -
                          log_gamma(n1p + 1.0) - log_gamma(n2p + 1.0)) +
                   (2.0 + d) * std::log(2.0) + (1.0 + n1p + n2) * std::log(std::fabs(c.W)) -
                   (1.0 + n1) * std::log(std::fabs(c.X)) -
                   (1.0 + n2) * std::log(std::fabs(c.Y)) + log_f;
  if (d > 0) log_mag += d * std::log(c.C);
  int sign = parity_sign(1LL + n2 + n2p);
  if (c.W < 0.0) sign *= parity_sign(1LL + n1p + n2);
  if (c.X < 0.0) sign *= parity_sign(1LL + n1);
  if (c.Y < 0.0) sign *= parity_sign(1LL + n2);
  return sign * std::exp(log_mag);
}

// idler cutoff: its marginal is exactly thermal(n_s), whose tail we can bound
int idler_cutoff(double n_s, int n_max) {
  if (n_s <= 0.0) return 0;
  double r = n_s / (1.0 + n_s);
  int n = int(std::ceil(std::log(1e-16) / std::log(r))) + 2;
  return std::clamp(n, 4, n_max);
}

PhotonDistribution build_joint_pmf(const ChannelParams& ch, int n1_max) {
  ElementContext c = make_context(ch);
  PhotonDistribution out;
  out.n1_size = n1_max + 1;
  out.n2_size = idler_cutoff(ch.n_s, n1_max) + 1;
  out.pmf.assign(std::size_t(out.n1_size) * out.n2_size, 0.0);
  for (int n1 = 0; n1 <= n1_max; ++n1)
    for (int n2 = 0; n2 < out.n2_size; ++n2)
      out.pmf[std::size_t(n1) * out.n2_size + n2] =
          std::max(element_impl(n1, n2, n1, n2, ch, c), 0.0);
  out.truncation = {n1_max, out.mass()};
  return out;
}

double conditional_entropy_bits(const ChannelParams& ch) {
  GaussianState s = apply_thermal_loss(tmsv_covariance(ch.n_s), 0, ch);
  return von_neumann_entropy(s);
}

int initial_cutoff(const ChannelParams& ch) {
  return int(std::ceil(10.0 * (1.0 + ch.kappa * ch.n_s + ch.n_b)));
}

}  // namespace

double joint_fock_element(int n1, int n2, int n1p, int n2p, const ChannelParams& ch) {
  ch.validate();
  return element_impl(n1, n2, n1p, n2p, ch, make_context(ch));
}

PhotonDistribution phase_averaged_joint_pmf(const ChannelParams& ch,
                                            const FockTruncation& trunc) {
  ch.validate();
  PhotonDistribution p = build_joint_pmf(ch, trunc.n_max);
  if (p.truncation.captured_mass < 1.0 - 1e-6)
    throw std::runtime_error(
        "phase_averaged_joint_pmf: truncation too small, increase n_max");
  return p;
}

double holevo_continuous_phase(const ChannelParams& ch) {
  ch.validate();
  if (ch.n_s == 0.0 || ch.kappa == 0.0) return 0.0;
  const double cond = conditional_entropy_bits(ch);
  double chi_prev = -1.0;
  for (int n1_max = initial_cutoff(ch); n1_max < (1 << 24); n1_max *= 2) {
    PhotonDistribution p = build_joint_pmf(ch, n1_max);
    double chi = p.entropy_bits() - cond;
    if (p.truncation.captured_mass >= 1.0 - 1e-10 && std::fabs(chi - chi_prev) < 1e-8)
      return chi;
    chi_prev = chi;
  }
  throw std::runtime_error("holevo_continuous_phase: truncation did not converge");
}

namespace {

// Unconditional entropy of (rho^0 + rho^pi)/2. The {0,pi} average keeps
// elements with even n1-n1'; combined with the channel selection rule
// n1-n1' = n2-n2', nonzero elements conserve j = n1-n2 and the parity of n2,
// so the matrix splits into small blocks indexed by (j, parity).
double bpsk_unconditional_entropy(const ChannelParams& ch, int n1_max, double* mass_out) {
  ElementContext c = make_context(ch);
  const int n2_max = idler_cutoff(ch.n_s, n1_max);
  std::vector<double> eigs;
  double mass = 0.0;
  for (int j = -n2_max; j <= n1_max; ++j) {
    int lo = std::max(0, -j), hi = std::min(n2_max, n1_max - j);
    if (hi < lo) continue;
    for (int parity = 0; parity < 2; ++parity) {
      std::vector<int> idx;
      for (int n2 = lo; n2 <= hi; ++n2)
        if ((n2 & 1) == parity) idx.push_back(n2);
      if (idx.empty()) continue;
      Eigen::MatrixXd block(idx.size(), idx.size());
      for (std::size_t r = 0; r < idx.size(); ++r)
        for (std::size_t q = r; q < idx.size(); ++q) {
          double v = element_impl(j + idx[r], idx[r], j + idx[q], idx[q], ch, c);
          block(r, q) = v;
          block(q, r) = v;
        }
      Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(block,
                                                        Eigen::EigenvaluesOnly);
      for (double e : es.eigenvalues()) {
        if (e < -1e-10)
          throw std::runtime_error("holevo_bpsk: eigenvalue below physicality tolerance");
        if (e > 0.0) {
          eigs.push_back(e);
          mass += e;
        }
      }
    }
  }
  if (mass_out) *mass_out = mass;
  return kernels::entropy_bits(eigs.data(), eigs.size());
}

}  // namespace

double holevo_bpsk(const ChannelParams& ch) {
  ch.validate();
  if (ch.n_s == 0.0 || ch.kappa == 0.0) return 0.0;
  const double cond = conditional_entropy_bits(ch);
  double chi_prev = -1.0;
  for (int n1_max = initial_cutoff(ch); n1_max < (1 << 24); n1_max *= 2) {
    double mass = 0.0;
    double chi = bpsk_unconditional_entropy(ch, n1_max, &mass) - cond;
    if (mass >= 1.0 - 1e-10 && std::fabs(chi - chi_prev) < 1e-8) return chi;
    chi_prev = chi;
  }
  throw std::runtime_error("holevo_bpsk: truncation did not converge");
}

double dts_log_pmf(int n, double amp2, double n_e) {
  if (n < 0) return -std::numeric_limits<double>::infinity();
  if (amp2 < 0.0 || n_e < 0.0) throw std::domain_error("dts_log_pmf: negative parameter");
  if (n_e == 0.0) {  // Poisson limit
    if (amp2 == 0.0) return n == 0 ? 0.0 : -std::numeric_limits<double>::infinity();
    return -amp2 + n * std::log(amp2) - log_gamma(n + 1.0);
  }
  double base = -amp2 / (1.0 + n_e) + n * std::log(n_e / (1.0 + n_e)) - std::log1p(n_e);
  if (amp2 == 0.0 || n == 0) return base;
  // log L_n(-x), x = amp2/(n_e(1+n_e)): positive terms t_k = C(n,k) x^k / k!,
  // log-concave in k; sum outward from the peak
  const double x = amp2 / (n_e * (1.0 + n_e));
  const double lx = std::log(x);
  auto log_term = [&](int k) {
    return log_gamma(n + 1.0) - log_gamma(n - k + 1.0) - 2.0 * log_gamma(k + 1.0) +
           k * lx;
  };
  double disc = (2.0 + x) * (2.0 + x) - 4.0 * (1.0 - x * n);
  int k0 = 0;
  if (disc > 0.0) k0 = std::clamp(int((-(2.0 + x) + std::sqrt(disc)) / 2.0), 0, n);
  const double lt0 = log_term(k0);
  double sum = 1.0;  // relative to t_{k0}
  double lt = lt0;
  for (int k = k0 + 1; k <= n; ++k) {  // ratio form avoids n lgamma calls
    lt += std::log((n - k + 1.0) * x) - 2.0 * std::log(double(k));
    double rel = std::exp(lt - lt0);
    sum += rel;
    if (rel < 1e-18 * sum) break;
  }
  lt = lt0;
  for (int k = k0; k > 0; --k) {
    lt -= std::log((n - k + 1.0) * x) - 2.0 * std::log(double(k));
    double rel = std::exp(lt - lt0);
    sum += rel;
    if (rel < 1e-18 * sum) break;
  }
  return base + lt0 + std::log(sum);
}

std::complex<double> dts_fock_element(const DisplacedThermal& d, int n, int m) {
  if (n < 0 || m < 0) throw std::domain_error("dts_fock_element: negative index");
  if (d.n_e < 0.0 || d.amp2 < 0.0) throw std::domain_error("dts_fock_element: bad state");
  if (n > m) return std::conj(dts_fock_element({d.amp2, d.theta, d.n_e}, m, n));
  const double L = d.amp2, ne = d.n_e;
  std::complex<double> phase = std::polar(1.0, (m - n) * d.theta);
  if (L == 0.0) {
    if (n != m) return 0.0;
    return std::exp(log_thermal_pmf(n, ne)) * phase;
  }
  if (ne == 0.0) {  // coherent state
    double lm = -L + 0.5 * (n + m) * std::log(L) -
                0.5 * (log_gamma(n + 1.0) + log_gamma(m + 1.0));
    return std::exp(lm) * phase;
  }
  // exact terminating (Kummer) form of the regularized 1F1; all terms positive
  const double z = L / (ne * (1.0 + ne));
  const double lz = std::log(z);
  std::vector<double> lt(n + 1);
  for (int k = 0; k <= n; ++k)
    lt[k] = log_gamma(n + 1.0) - log_gamma(n - k + 1.0) - log_gamma(k + 1.0) +
            k * lz - log_gamma(m - n + k + 1.0);
  double log_mag = -L / (1.0 + ne) + n * std::log(ne) + 0.5 * (m - n) * std::log(L) +
                   0.5 * (log_gamma(m + 1.0) - log_gamma(n + 1.0)) -
                   (m + 1.0) * std::log1p(ne) + kernels::logsumexp(lt.data(), lt.size());
  return std::exp(log_mag) * phase;
}

PhotonDistribution dts_photon_pmf(const DisplacedThermal& d, const FockTruncation& trunc) {
  if (d.n_e < 0.0 || d.amp2 < 0.0) throw std::domain_error("dts_photon_pmf: bad state");
  const double mean = d.amp2 + d.n_e;
  const double var = d.amp2 * (1.0 + 2.0 * d.n_e) + d.n_e * (1.0 + d.n_e);
  const double sd = std::sqrt(std::max(var, 0.0));
  int lo = std::max(0, int(std::floor(mean - 12.0 * sd - 10.0)));
  int hi = std::max(trunc.n_max, int(std::ceil(mean + 12.0 * sd + 25.0)));
  PhotonDistribution out;
  out.n_offset = lo;
  out.n1_size = hi - lo + 1;
  out.n2_size = 1;
  out.pmf.resize(out.n1_size);
  for (int n = lo; n <= hi; ++n)
    out.pmf[n - lo] = std::exp(dts_log_pmf(n, d.amp2, d.n_e));
  out.truncation = {hi, out.mass()};
  if (out.truncation.captured_mass < 1.0 - 1e-9)
    throw std::runtime_error("dts_photon_pmf: truncation window too small");
  return out;
}

double holevo_dts_ensemble(int m_modes, const DisplacedThermal& d) {
  if (m_modes < 1) throw std::domain_error("holevo_dts_ensemble: m_modes must be >= 1");
  DisplacedThermal cat{m_modes * d.amp2, d.theta, d.n_e};
  PhotonDistribution p = dts_photon_pmf(cat, {0, 0.0});
  return p.entropy_bits() - g_entropy(d.n_e);
}

double holevo_sfg_estimate(double m_modes, const ChannelParams& ch, double epsilon) {
  ch.validate();
  if (!(epsilon > 0.0 && epsilon < 1.0))
    throw std::domain_error("holevo_sfg_estimate: epsilon must lie in (0,1)");
  if (ch.n_s == 0.0 || ch.kappa == 0.0) return 0.0;
  double amp2 = ch.kappa * (1.0 - epsilon) * m_modes * ch.n_s * (ch.n_s + 1.0) /
                (ch.n_b + 1.0);
  double n_e = ch.n_s * std::log(1.0 / epsilon) / 2.0;
  return holevo_dts_ensemble(1, {amp2, 0.0, n_e}) / m_modes;
}

}  // namespace ealab
