#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "ealab/capacities.hpp"
#include "ealab/receivers.hpp"

#include <cmath>

using namespace ealab;

namespace {
const ChannelParams kFig6{1e-3, 1e4, 1e-3};
}

TEST_CASE("optimal gain forms") {
  ChannelParams ch{0.5, 4.0, 0.25};
  CHECK(opa_optimal_gain(ch) == doctest::Approx(1.0 + 0.5 / 4.0).epsilon(1e-14));
  ImperfectionModel perfect{1.0, 1.0, 1.0};
  CHECK(opa_optimal_gain(ch, perfect) == doctest::Approx(opa_optimal_gain(ch)).epsilon(1e-14));
  ImperfectionModel imp{0.81, 0.9, 1.0};
  CHECK(opa_optimal_gain(ch, imp) ==
        doctest::Approx(1.0 + std::sqrt(0.81 * 0.25) / (0.9 * 4.0)).epsilon(1e-14));
}

TEST_CASE("OPA mean photon number: limits and phase dependence") {
  ChannelParams ch{0.5, 4.0, 0.25};
  OpaConfig unity{1.0, 100.0, ch};
  CHECK(opa_mean_photon(0.0, unity) == doctest::Approx(ch.n_s).epsilon(1e-14));  // G = 1 passthrough
  OpaConfig cfg{1.5, 100.0, ch};
  double n0 = opa_mean_photon(0.0, cfg), npi = opa_mean_photon(M_PI, cfg);
  CHECK(n0 > npi);  // constructive vs destructive interference
  double mid = opa_mean_photon(M_PI / 2.0, cfg);
  CHECK(mid == doctest::Approx(0.5 * (n0 + npi)).epsilon(1e-12));
  // perfect-efficiency imperfection model collapses to the ideal expression
  ImperfectionModel perfect{1.0, 1.0, 1.0};
  CHECK(opa_mean_photon(0.7, cfg, perfect) ==
        doctest::Approx(opa_mean_photon(0.7, cfg)).epsilon(1e-13));
  CHECK_THROWS_AS(opa_mean_photon(0.0, OpaConfig{0.5, 10.0, ch}), std::domain_error);
}

TEST_CASE("OPA count pmf: normalization and negative-binomial mean") {
  ChannelParams ch{0.9, 0.1, 0.5};
  OpaConfig cfg{2.0, 12.0, ch};
  double nbar = opa_mean_photon(0.0, cfg);
  int n_max = int(12.0 * nbar + 14.0 * std::sqrt(12.0 * nbar * (1.0 + nbar)) + 40.0);
  PhotonDistribution p = opa_count_pmf(0.0, cfg, n_max);
  CHECK(p.mass() == doctest::Approx(1.0).epsilon(1e-9));
  CHECK(p.mean() == doctest::Approx(12.0 * nbar).epsilon(1e-8));
}

TEST_CASE("rate_from_error endpoints") {
  CHECK(rate_from_error(0.5, 100.0) == doctest::Approx(0.0).epsilon(1e-15));
  CHECK(rate_from_error(0.0, 100.0) == doctest::Approx(0.01).epsilon(1e-15));
  CHECK(rate_from_error(0.1, 1.0) ==
        doctest::Approx(1.0 + 0.1 * std::log2(0.1) + 0.9 * std::log2(0.9)).epsilon(1e-14));
  CHECK_THROWS_AS(rate_from_error(1.5, 1.0), std::domain_error);
}

TEST_CASE("Gaussian error surrogate tracks the exact ML error on count statistics") {
  // moderate block, O(1) discriminability: compare 1/2 erfc(arg) against the
  // exact maximum-likelihood error of the negative-binomial count channel
  ChannelParams ch{0.9, 0.4, 0.08};
  OpaConfig cfg{1.0 + std::sqrt(ch.n_s) / ch.n_b, 400.0, ch};
  double n0 = opa_mean_photon(0.0, cfg), npi = opa_mean_photon(M_PI, cfg);
  int n_max = int(cfg.block_size * n0 + 14.0 * std::sqrt(cfg.block_size * n0 * (1.0 + n0)) + 60.0);
  double exact = 0.0;
  for (int n = 0; n <= n_max; ++n) {
    double p0 = std::exp(opa_count_log_pmf(n, 0.0, cfg));
    double p1 = std::exp(opa_count_log_pmf(n, M_PI, cfg));
    exact += 0.5 * std::min(p0, p1);
  }
  double surrogate = opa_error_prob(cfg).p_error;
  CHECK(surrogate == doctest::Approx(exact).epsilon(0.10));
  CHECK(surrogate < 0.45);  // the comparison is only meaningful off the p = 1/2 wall
}

TEST_CASE("receiver ordering at the reference operating point") {
  for (double m : {1e8, 1e9}) {
    auto opa = opa_error_prob({opa_optimal_gain(kFig6), m, kFig6});
    auto pcr = pcr_error_prob(m, kFig6);
    auto sfg = sfg_helstrom_bound(m, kFig6, 0.025);
    CHECK(pcr.p_error < opa.p_error);
    CHECK(sfg.p_error < pcr.p_error);
    CHECK(sfg.rate_per_mode > pcr.rate_per_mode);
    CHECK(pcr.rate_per_mode > opa.rate_per_mode);
  }
}

TEST_CASE("error probabilities decrease with block size") {
  double prev_opa = 0.5, prev_pcr = 0.5, prev_sfg = 0.5;
  for (double m : {1e7, 1e8, 1e9, 1e10}) {
    double opa = opa_error_prob({opa_optimal_gain(kFig6), m, kFig6}).p_error;
    double pcr = pcr_error_prob(m, kFig6).p_error;
    double sfg = sfg_helstrom_bound(m, kFig6, 0.025).p_error;
    CHECK(opa < prev_opa);
    CHECK(pcr < prev_pcr);
    CHECK(sfg < prev_sfg);
    prev_opa = opa;
    prev_pcr = pcr;
    prev_sfg = sfg;
  }
}

TEST_CASE("imperfections only degrade the OPA") {
  OpaConfig cfg{opa_optimal_gain(kFig6), 1e8, kFig6};
  double ideal = opa_error_prob(cfg).p_error;
  ImperfectionModel perfect{1.0, 1.0, 1.0};
  CHECK(opa_error_prob(cfg, perfect).p_error == doctest::Approx(ideal).epsilon(1e-13));
  ImperfectionModel imp{0.95, 1.0, 0.98};
  CHECK(opa_error_prob(cfg, imp).p_error > ideal);
  ImperfectionModel bad{0.0, 1.0, 1.0};
  CHECK_THROWS_AS(opa_error_prob(cfg, bad), std::domain_error);
}

TEST_CASE("pure-state Helstrom closed form brackets the noisy bound") {
  // the noisy displaced-thermal computation can never beat the pure-state limit
  for (double m : {1e8, 1e9}) {
    double pure = sfg_helstrom_pure(m, kFig6);
    double noisy = sfg_helstrom_bound(m, kFig6, 0.025).p_error;
    CHECK(noisy >= pure * 0.999);
  }
}

TEST_CASE("SFG Monte Carlo: determinism and agreement with the bound") {
  SfgConfig cfg;
  cfg.samples = 4000;
  cfg.seed = 7;
  auto a = sfg_simulate(cfg, 1e8, kFig6, 0.0);
  auto b = sfg_simulate(cfg, 1e8, kFig6, 0.0);
  CHECK(a.p_error == b.p_error);  // bit-identical under a fixed seed
  REQUIRE(a.mc_stderr.has_value());

  auto api = sfg_simulate(cfg, 1e8, kFig6, M_PI);
  double pe = 0.5 * (a.p_error + api.p_error);
  double se = 0.5 * std::hypot(*a.mc_stderr, *api.mc_stderr);
  double bound = sfg_helstrom_bound(1e8, kFig6, cfg.epsilon).p_error;
  CHECK(std::fabs(pe - bound) < 4.0 * se + 1e-3);

  cfg.seed = 8;
  auto c = sfg_simulate(cfg, 1e8, kFig6, 0.0);
  CHECK(c.p_error != a.p_error);  // seeds actually reach the sampler
}

TEST_CASE("SFG simulate validates its configuration") {
  SfgConfig bad;
  bad.cycles = 0;
  CHECK_THROWS_AS(sfg_simulate(bad, 1e8, kFig6, 0.0), std::domain_error);
  SfgConfig bad2;
  bad2.epsilon = 1.0;
  CHECK_THROWS_AS(sfg_simulate(bad2, 1e8, kFig6, 0.0), std::domain_error);
}

TEST_CASE("imperfection threshold brackets the break-even point") {
  double thr = imperfection_threshold(1e9, kFig6);
  CHECK(thr > 0.0);
  CHECK(thr < 1.0);
  OpaConfig cfg{opa_optimal_gain(kFig6), 1e9, kFig6};
  double cap = classical_capacity(kFig6);
  auto rate_at = [&](double x) {
    ImperfectionModel m{x, 1.0, 1.0};
    return opa_error_prob(cfg, m).rate_per_mode;
  };
  CHECK(rate_at(thr * 1.02) > cap);
  CHECK(rate_at(thr * 0.98) < cap);
}
