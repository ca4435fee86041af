#pragma once
// Batch numeric primitives: scalar reference implementations plus AVX2
// variants selected once at startup. Callers always go through the
// dispatched entry points; the scalar versions stay exposed so the test
// suite can check bitwise-reasonable equivalence between backends.
#include <cstddef>

namespace ealab::kernels {

// y[i] = exp(x[i])
void exp_v(const double* x, double* y, std::size_t n);
// y[i] = log(x[i]); x[i] must be > 0
void log_v(const double* x, double* y, std::size_t n);
// -sum p[i] * log2(p[i]) with 0*log(0) := 0; entries must be >= 0
double entropy_bits(const double* p, std::size_t n);
// log(sum exp(x[i])), guarded against overflow; n >= 1
double logsumexp(const double* x, std::size_t n);

const char* active_backend();  // "avx2" or "scalar"

namespace scalar {
void exp_v(const double* x, double* y, std::size_t n);
void log_v(const double* x, double* y, std::size_t n);
double entropy_bits(const double* p, std::size_t n);
double logsumexp(const double* x, std::size_t n);
}  // namespace scalar

}  // namespace ealab::kernels
