#pragma once
// Independent test oracles. Everything here is deliberately brute-force and
// shares no code path with the library quantities it checks.
#include "ealab/gaussian.hpp"

#include <Eigen/Dense>
#include <unsupported/Eigen/MatrixFunctions>

#include <cmath>
#include <complex>
#include <vector>

namespace ealab::oracle {

// Joint photon-number distribution p(n1, n2) of the TMSV sent through the
// thermal-loss channel, built the slow way: explicit beam-splitter unitary
// against a thermal environment, summed over environment Fock states.
// n1 indexes the channel output, n2 the retained idler.
inline Eigen::MatrixXd kraus_joint_pmf(const ChannelParams& ch, int n1_max, int n2_max,
                                       double env_tail = 1e-14) {
  if (ch.kappa >= 1.0 || ch.kappa <= 0.0)
    throw std::domain_error("kraus_joint_pmf: needs kappa in (0,1)");
  const double n_env = ch.n_b / (1.0 - ch.kappa);
  const double theta = std::acos(std::sqrt(ch.kappa));

  int m_max = 0;
  if (n_env > 0.0) {
    double r = n_env / (1.0 + n_env);
    while (std::pow(r, m_max) > env_tail) ++m_max;
  }
  const int block_max = n2_max + m_max;

  // per-total-photon-number blocks of exp[theta (a_s^dag a_e - a_s a_e^dag)],
  // basis |k>_signal |N-k>_env
  std::vector<Eigen::MatrixXd> u(block_max + 1);
  for (int n = 0; n <= block_max; ++n) {
    Eigen::MatrixXd g = Eigen::MatrixXd::Zero(n + 1, n + 1);
    for (int k = 0; k < n; ++k) {
      double v = std::sqrt(double(k + 1) * double(n - k));
      g(k + 1, k) = v;
      g(k, k + 1) = -v;
    }
    u[n] = (theta * g).exp();
  }

  std::vector<double> c2(n2_max + 1), q(m_max + 1);  // |c_n|^2 of the TMSV; env weights
  for (int n = 0; n <= n2_max; ++n)
    c2[n] = std::pow(ch.n_s / (1.0 + ch.n_s), n) / (1.0 + ch.n_s);
  for (int m = 0; m <= m_max; ++m)
    q[m] = (n_env > 0.0) ? std::pow(n_env / (1.0 + n_env), m) / (1.0 + n_env)
                         : (m == 0 ? 1.0 : 0.0);

  // <n1, n2| rho |n1, n2> = |c_{n2}|^2 sum_m q_m |U_{n2+m}(n1, n2)|^2
  Eigen::MatrixXd p = Eigen::MatrixXd::Zero(n1_max + 1, n2_max + 1);
  for (int n2 = 0; n2 <= n2_max; ++n2)
    for (int m = 0; m <= m_max; ++m) {
      const int block = n2 + m;
      for (int n1 = 0; n1 <= std::min(n1_max, block); ++n1) {
        double a = u[block](n1, n2);
        p(n1, n2) += c2[n2] * q[m] * a * a;
      }
    }
  return p;
}

// Uhlmann fidelity of two zero-mean Gaussian states, covariances in the
// project convention (vacuum = I); computed from symplectic invariants only
inline double gaussian_fidelity(const Eigen::MatrixXd& cov1, const Eigen::MatrixXd& cov2) {
  const int n = int(cov1.rows()) / 2;
  Eigen::MatrixXd omega = Eigen::MatrixXd::Zero(2 * n, 2 * n);
  for (int i = 0; i < n; ++i) {
    omega(2 * i, 2 * i + 1) = 1.0;
    omega(2 * i + 1, 2 * i) = -1.0;
  }
  Eigen::MatrixXd v1 = cov1 / 2.0, v2 = cov2 / 2.0;  // vacuum = I/2 here
  Eigen::MatrixXd vsum_inv = (v1 + v2).inverse();
  Eigen::MatrixXd vaux = omega.transpose() * vsum_inv * (omega / 4.0 + v2 * omega * v1);
  Eigen::MatrixXd m = vaux * omega;
  Eigen::MatrixXd inner =
      Eigen::MatrixXd::Identity(2 * n, 2 * n) + (m * m).inverse() / 4.0;
  Eigen::MatrixXd w = inner.sqrt();
  double f4 = (2.0 * (w + Eigen::MatrixXd::Identity(2 * n, 2 * n)) * vaux).determinant() /
              (v1 + v2).determinant();
  return std::pow(std::max(f4, 0.0), 0.25);
}

// covariance of the phase-encoded channel output (library state machinery)
inline Eigen::MatrixXd encoded_cov(const ChannelParams& ch, double theta) {
  GaussianState s = apply_phase(apply_thermal_loss(tmsv_covariance(ch.n_s), 0, ch), 0, theta);
  return s.cov;
}

// finite-difference QFI from the fidelity drop, two-level Richardson in dtheta^2
inline double qfi_from_fidelity(const ChannelParams& ch, double d = 0.04) {
  Eigen::MatrixXd v0 = encoded_cov(ch, 0.0);
  auto j = [&](double h) {
    return 8.0 * (1.0 - gaussian_fidelity(v0, encoded_cov(ch, h))) / (h * h);
  };
  double j1 = j(d), j2 = j(d / 2.0), j3 = j(d / 4.0);
  double r1 = (4.0 * j2 - j1) / 3.0, r2 = (4.0 * j3 - j2) / 3.0;
  return (16.0 * r2 - r1) / 15.0;
}

struct LinearFit {
  double intercept, slope, r_squared;
};

inline LinearFit fit_line(const std::vector<double>& x, const std::vector<double>& y) {
  const std::size_t n = x.size();
  double sx = 0, sy = 0, sxx = 0, sxy = 0, syy = 0;
  for (std::size_t i = 0; i < n; ++i) {
    sx += x[i];
    sy += y[i];
    sxx += x[i] * x[i];
    sxy += x[i] * y[i];
    syy += y[i] * y[i];
  }
  double denom = n * sxx - sx * sx;
  double slope = (n * sxy - sx * sy) / denom;
  double intercept = (sy - slope * sx) / n;
  double ss_tot = syy - sy * sy / n;
  double ss_res = 0;
  for (std::size_t i = 0; i < n; ++i) {
    double e = y[i] - (intercept + slope * x[i]);
    ss_res += e * e;
  }
  return {intercept, slope, ss_tot > 0 ? 1.0 - ss_res / ss_tot : 1.0};
}

}  // namespace ealab::oracle
