#include "ealab/kernels.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace ealab::kernels {

namespace scalar {

void exp_v(const double* x, double* y, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) y[i] = std::exp(x[i]);
}

void log_v(const double* x, double* y, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) y[i] = std::log(x[i]);
}

double entropy_bits(const double* p, std::size_t n) {
  double acc = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    if (p[i] > 0.0) acc -= p[i] * std::log(p[i]);
  }
  return acc / std::log(2.0);
}

double logsumexp(const double* x, std::size_t n) {
  double m = -std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < n; ++i) m = std::max(m, x[i]);
  if (!std::isfinite(m)) return m;  // all -inf (or a stray +inf/NaN)
  double acc = 0.0;
  for (std::size_t i = 0; i < n; ++i) acc += std::exp(x[i] - m);
  return m + std::log(acc);
}

}  // namespace scalar

#if defined(EALAB_HAVE_AVX2_TU)
namespace avx2 {
// Implemented in kernels_avx2.cpp (compiled with -mavx2 -mfma).
void exp_v(const double*, double*, std::size_t);
void log_v(const double*, double*, std::size_t);
double entropy_bits(const double*, std::size_t);
double logsumexp(const double*, std::size_t);
}  // namespace avx2
#endif

namespace {

struct Backend {
  void (*exp_v)(const double*, double*, std::size_t);
  void (*log_v)(const double*, double*, std::size_t);
  double (*entropy_bits)(const double*, std::size_t);
  double (*logsumexp)(const double*, std::size_t);
  const char* name;
};

Backend pick_backend() {
#if defined(EALAB_HAVE_AVX2_TU)
  if (__builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma")) {
    return {avx2::exp_v, avx2::log_v, avx2::entropy_bits,
            avx2::logsumexp, "avx2"};
  }
#endif
  return {scalar::exp_v, scalar::log_v, scalar::entropy_bits,
          scalar::logsumexp, "scalar"};
}

const Backend& backend() {
  static const Backend b = pick_backend();
  return b;
}

}  // namespace

void exp_v(const double* x, double* y, std::size_t n) { backend().exp_v(x, y, n); }
void log_v(const double* x, double* y, std::size_t n) { backend().log_v(x, y, n); }
double entropy_bits(const double* p, std::size_t n) { return backend().entropy_bits(p, n); }
double logsumexp(const double* x, std::size_t n) { return backend().logsumexp(x, n); }
const char* active_backend() { return backend().name; }

}  // namespace ealab::kernels
