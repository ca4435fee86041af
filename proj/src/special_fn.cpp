#include "ealab/special_fn.hpp"

#include <cmath>
#include <limits>

namespace ealab {

double log_gamma(double x) {
  if (!(x > 0.0)) throw std::domain_error("log_gamma: x must be positive");
#if defined(__GLIBC__)
  int sign;
  return ::lgamma_r(x, &sign);
#else
  return std::lgamma(x);
#endif
}

double erfc(double x) { return std::erfc(x); }

namespace {

// Shared core for both hypergeometric patterns. Terms are positive; we track
// the running sum in log space via a streaming log-add. ratio(k) is
// t_{k+1}/t_k. Termination: next term below 1e-16 of the sum while the term
// sequence is decreasing; hard cap guards pathological inputs.
struct LogSeries {
  double log_sum;
  int terms_used;
  double log_tail_bound;  // log of the absolute tail bound (relative to the raw sum)
};

template <typename Ratio>
LogSeries sum_log_series(double log_t0, Ratio ratio) {
  constexpr int kMaxTerms = 1000000;
  double log_t = log_t0;
  double log_sum = log_t0;
  for (int k = 0; k < kMaxTerms; ++k) {
    double r = ratio(k);
    if (r <= 0.0) {  // series terminated exactly (nonpositive ratio can't occur for our params)
      return {log_sum, k + 1, -std::numeric_limits<double>::infinity()};
    }
    double log_next = log_t + std::log(r);
    if (r < 1.0 && log_next < log_sum + std::log(1e-16)) {
      // geometric tail bound: sum_{j>=1} t_k r^j <= t_next / (1 - r)
      double log_bound = log_next - std::log1p(-r);
      return {log_sum, k + 1, log_bound};
    }
    log_t = log_next;
    // log_sum = logadd(log_sum, log_t)
    if (log_t > log_sum)
      log_sum = log_t + std::log1p(std::exp(log_sum - log_t));
    else
      log_sum += std::log1p(std::exp(log_t - log_sum));
  }
  double sum = std::exp(log_sum);
  throw truncation_error("hypergeometric series failed to converge",
                         SeriesResult{sum, kMaxTerms, std::exp(log_t)});
}

SeriesResult to_result(const LogSeries& s) {
  return {std::exp(s.log_sum), s.terms_used, std::exp(s.log_tail_bound)};
}

LogSeries gauss_core(int a, int b, int c, double z) {
  if (a < 1 || b < 1 || c < 1)
    throw std::domain_error("gauss_2f1_regularized: parameters must be positive integers");
  if (!(z >= 0.0 && z < 1.0))
    throw std::domain_error("gauss_2f1_regularized: z must lie in [0,1)");
  double log_t0 = -log_gamma(static_cast<double>(c));
  if (z == 0.0) return {log_t0, 1, -std::numeric_limits<double>::infinity()};
  auto ratio = [=](int k) {
    return (a + k) * static_cast<double>(b + k) * z /
           ((k + 1) * static_cast<double>(c + k));
  };
  return sum_log_series(log_t0, ratio);
}

LogSeries confluent_core(int a, int b, double z) {
  if (a < 1 || b < 1)
    throw std::domain_error("confluent_1f1_regularized: parameters must be positive integers");
  if (!(z >= 0.0))
    throw std::domain_error("confluent_1f1_regularized: z must be nonnegative");
  double log_t0 = -log_gamma(static_cast<double>(b));
  if (z == 0.0) return {log_t0, 1, -std::numeric_limits<double>::infinity()};
  auto ratio = [=](int k) {
    return (a + k) * z / ((k + 1) * static_cast<double>(b + k));
  };
  return sum_log_series(log_t0, ratio);
}

}  // namespace

SeriesResult gauss_2f1_regularized(int a, int b, int c, double z) {
  return to_result(gauss_core(a, b, c, z));
}

SeriesResult confluent_1f1_regularized(int a, int b, double z) {
  return to_result(confluent_core(a, b, z));
}

double log_gauss_2f1_regularized(int a, int b, int c, double z) {
  return gauss_core(a, b, c, z).log_sum;
}

double log_confluent_1f1_regularized(int a, int b, double z) {
  return confluent_core(a, b, z).log_sum;
}

}  // namespace ealab
