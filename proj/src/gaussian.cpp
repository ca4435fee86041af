#include "ealab/gaussian.hpp"

#include <algorithm>
#include <cmath>

namespace ealab {

double g_entropy(double n) {
  if (n < 0.0) throw std::domain_error("g_entropy: negative mean photon number");
  if (n == 0.0) return 0.0;
  // (n+1) log2(n+1) - n log2 n, stable for tiny n via log1p
  return ((n + 1.0) * std::log1p(n) - n * std::log(n)) / std::log(2.0);
}

GaussianState vacuum_state(int n_modes) {
  GaussianState s;
  s.n_modes = n_modes;
  s.mean = Eigen::VectorXd::Zero(2 * n_modes);
  s.cov = Eigen::MatrixXd::Identity(2 * n_modes, 2 * n_modes);
  return s;
}

GaussianState thermal_state(double n_bar) {
  GaussianState s = vacuum_state(1);
  s.cov *= (2.0 * n_bar + 1.0);
  return s;
}

GaussianState tmsv_covariance(double n_s) {
  if (n_s < 0.0) throw std::domain_error("tmsv_covariance: negative n_s");
  GaussianState s = vacuum_state(2);
  double d = 2.0 * n_s + 1.0;
  double c = 2.0 * std::sqrt(n_s * (n_s + 1.0));
  s.cov(0, 0) = s.cov(1, 1) = s.cov(2, 2) = s.cov(3, 3) = d;
  s.cov(0, 2) = s.cov(2, 0) = c;
  s.cov(1, 3) = s.cov(3, 1) = -c;
  return s;
}

static void check_mode(const GaussianState& s, int mode_index) {
  if (mode_index < 0 || mode_index >= s.n_modes)
    throw std::out_of_range("invalid mode index");
}

GaussianState apply_thermal_loss(const GaussianState& state, int mode_index,
                                 const ChannelParams& ch) {
  check_mode(state, mode_index);
  ch.validate();
  GaussianState out = state;
  const int i = 2 * mode_index;
  const double k = ch.kappa, sk = std::sqrt(ch.kappa);
  // X = sqrt(k) on the mode, identity elsewhere; cov -> X cov X^T + Y
  for (int r = 0; r < 2 * state.n_modes; ++r) {
    for (int c = 0; c < 2 * state.n_modes; ++c) {
      bool rm = (r == i || r == i + 1), cm = (c == i || c == i + 1);
      if (rm && cm)
        out.cov(r, c) = k * state.cov(r, c);
      else if (rm || cm)
        out.cov(r, c) = sk * state.cov(r, c);
    }
  }
  out.cov(i, i) += 2.0 * ch.n_b + 1.0 - k;
  out.cov(i + 1, i + 1) += 2.0 * ch.n_b + 1.0 - k;
  out.mean(i) *= sk;
  out.mean(i + 1) *= sk;
  return out;
}

GaussianState apply_phase(const GaussianState& state, int mode_index, double theta) {
  check_mode(state, mode_index);
  GaussianState out = state;
  const int i = 2 * mode_index;
  // chosen so that rotating the signal mode of the post-channel TMSV turns the
  // 2 C_p Z cross block into 2 C_p [[cos t, sin t],[sin t, -cos t]]
  Eigen::Matrix2d R;
  R << std::cos(theta), -std::sin(theta), std::sin(theta), std::cos(theta);
  Eigen::MatrixXd S = Eigen::MatrixXd::Identity(2 * state.n_modes, 2 * state.n_modes);
  S.block<2, 2>(i, i) = R;
  out.cov = S * state.cov * S.transpose();
  out.mean = S * state.mean;
  return out;
}

SymplecticSpectrum symplectic_eigenvalues(const GaussianState& state) {
  // The two-mode closed form subtracts nearly equal invariants when the state
  // is close to pure, which costs ~sqrt(eps) of relative accuracy in mu - 1;
  // accept that much slack before declaring the covariance unphysical.
  constexpr double kPhysTol = 1e-6;
  std::vector<double> mu;
  if (state.n_modes == 1) {
    double det = state.cov.determinant();
    mu.push_back(std::sqrt(std::max(det, 0.0)));
  } else if (state.n_modes == 2) {
    // two-mode closed form from the symplectic invariants
    Eigen::Matrix2d A = state.cov.block<2, 2>(0, 0);
    Eigen::Matrix2d B = state.cov.block<2, 2>(2, 2);
    Eigen::Matrix2d C = state.cov.block<2, 2>(0, 2);
    double delta = A.determinant() + B.determinant() + 2.0 * C.determinant();
    double det = state.cov.determinant();
    double disc = std::max(delta * delta - 4.0 * det, 0.0);
    double root = std::sqrt(disc);
    double mu_p = std::sqrt(std::max((delta + root) / 2.0, 0.0));
    double mu_m = std::sqrt(std::max((delta - root) / 2.0, 0.0));
    mu = {mu_p, mu_m};
  } else {
    throw std::invalid_argument("symplectic_eigenvalues: only 1 or 2 modes supported");
  }
  std::sort(mu.begin(), mu.end(), std::greater<double>());
  for (double& m : mu) {
    if (m < 1.0 - kPhysTol)
      throw std::runtime_error("symplectic_eigenvalues: unphysical covariance (mu < 1)");
    m = std::max(m, 1.0);
  }
  return {mu};
}

double von_neumann_entropy(const GaussianState& state) {
  double s = 0.0;
  for (double mu : symplectic_eigenvalues(state).mu)
    s += g_entropy(std::max(mu - 1.0, 0.0) / 2.0);
  return s;
}

}  // namespace ealab
