#pragma once
// Exact Fock-basis Holevo quantities for phase-encoded states: the
// continuous-phase TMSV ensemble, the BPSK ensemble, displaced-thermal-state
// statistics, and the feed-forward-SFG Holevo estimate.
#include "ealab/gaussian.hpp"

#include <complex>
#include <vector>

namespace ealab {

struct FockTruncation {
  int n_max;             // per-mode photon cutoff (inclusive)
  double captured_mass;  // filled in by the producer
};

struct PhotonDistribution {
  // 1-D: n2_size == 1 and pmf[n - n_offset] = P(n).
  // Joint: pmf[(n1) * n2_size + n2] = P(n1, n2) with n_offset == 0.
  std::vector<double> pmf;
  int n1_size = 0;
  int n2_size = 1;
  int n_offset = 0;  // first photon number covered (1-D windowed pmfs)
  FockTruncation truncation{0, 0.0};

  double at(int n1, int n2 = 0) const { return pmf[std::size_t(n1) * n2_size + n2]; }
  double mass() const;
  double mean() const;          // 1-D only
  double entropy_bits() const;  // Shannon entropy of the stored mass
};

struct DisplacedThermal {
  double amp2;   // |lambda|^2
  double theta;  // phase of the displacement
  double n_e;    // thermal noise photons, >= 0
};

// Fock matrix element <n1 n2| rho_RI |n1' n2'> of the TMSV after the
// thermal-loss channel (zero encoded phase); vanishes unless n1-n1' = n2-n2'
double joint_fock_element(int n1, int n2, int n1p, int n2p, const ChannelParams& ch);

// diagonal p(n1, n2) of the phase-averaged output state on a truncated grid;
// the idler cutoff shrinks automatically to where its thermal tail is negligible
PhotonDistribution phase_averaged_joint_pmf(const ChannelParams& ch,
                                            const FockTruncation& trunc);

// Holevo information of the continuous-phase ensemble, bits/mode
double holevo_continuous_phase(const ChannelParams& ch);

// Holevo information of the {0, pi} ensemble, bits/mode
double holevo_bpsk(const ChannelParams& ch);

// Fock element of a displaced thermal state (exact terminating form)
std::complex<double> dts_fock_element(const DisplacedThermal& d, int n, int m);

// photon-number pmf (Laguerre statistics); window auto-extends past trunc.n_max
// if the mass there is insufficient
PhotonDistribution dts_photon_pmf(const DisplacedThermal& d, const FockTruncation& trunc);

// chi of the M-fold repetition ensemble concentrated on one mode:
// H[P_DTS(.; sqrt(M) lambda, n_e)] - g(n_e), total bits
double holevo_dts_ensemble(int m_modes, const DisplacedThermal& d);

// SFG-receiver Holevo estimate, bits/mode:
// |lambda|^2 = kappa (1-eps) M n_s (n_s+1)/(n_b+1), n_e = n_s ln(1/eps)/2
double holevo_sfg_estimate(double m_modes, const ChannelParams& ch, double epsilon);

// log P_DTS(n) for a single photon number (used by samplers and likelihoods)
double dts_log_pmf(int n, double amp2, double n_e);

}  // namespace ealab
