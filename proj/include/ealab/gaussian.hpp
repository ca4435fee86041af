#pragma once
// Two-mode Gaussian state machinery in the q = a + a^dag convention:
// vacuum covariance = identity, thermal(n) covariance = (2n+1) I,
// entropy of symplectic eigenvalue mu is g((mu-1)/2) bits.
// This convention is fixed project-wide; no conversions elsewhere.
#include <Eigen/Dense>

#include <stdexcept>
#include <vector>

namespace ealab {

struct ChannelParams {
  double kappa;  // power transmissivity, in [0,1]
  double n_b;    // channel-added noise photons at the output, >= 0
  double n_s;    // mean signal photon number, >= 0

  void validate() const {
    if (!(kappa >= 0.0 && kappa <= 1.0)) throw std::domain_error("kappa outside [0,1]");
    if (!(n_b >= 0.0)) throw std::domain_error("n_b negative");
    if (!(n_s >= 0.0)) throw std::domain_error("n_s negative");
  }
};

struct GaussianState {
  int n_modes;
  Eigen::VectorXd mean;  // length 2*n_modes, (q1,p1,q2,p2,...)
  Eigen::MatrixXd cov;   // 2n x 2n symmetric
};

struct SymplecticSpectrum {
  std::vector<double> mu;  // sorted descending, clamped to >= 1
};

// thermal-state entropy in bits; g(0) = 0
double g_entropy(double n);

GaussianState vacuum_state(int n_modes);
GaussianState thermal_state(double n_bar);

// two-mode squeezed vacuum: diag blocks (2 n_s + 1) I, off-diag 2 sqrt(n_s(n_s+1)) Z
GaussianState tmsv_covariance(double n_s);

// thermal-loss channel on one mode: Lambda_SS -> kappa Lambda_SS + (2 n_b + 1 - kappa) I,
// cross blocks scale by sqrt(kappa), mean scales by sqrt(kappa)
GaussianState apply_thermal_loss(const GaussianState& state, int mode_index,
                                 const ChannelParams& ch);

// rotate one mode's quadratures by theta
GaussianState apply_phase(const GaussianState& state, int mode_index, double theta);

SymplecticSpectrum symplectic_eigenvalues(const GaussianState& state);

double von_neumann_entropy(const GaussianState& state);  // bits

}  // namespace ealab
