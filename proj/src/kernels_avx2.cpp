// AVX2+FMA variants of the batch primitives. Polynomial exp/log cores follow
// the classic Cephes rational approximations (~1 ulp on the reduced range).
#include <immintrin.h>

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <limits>

namespace ealab::kernels::avx2 {

namespace {

inline __m256d exp4(__m256d x) {
  const __m256d log2e = _mm256_set1_pd(1.4426950408889634073599);
  const __m256d c1 = _mm256_set1_pd(6.93359375e-1);
  const __m256d c2 = _mm256_set1_pd(-2.1219444005469058277e-4);
  __m256d n = _mm256_round_pd(_mm256_mul_pd(x, log2e),
                              _MM_FROUND_TO_NEAREST_INT | _MM_FROUND_NO_EXC);
  __m256d r = _mm256_fnmadd_pd(n, c1, x);
  r = _mm256_fnmadd_pd(n, c2, r);

  __m256d z = _mm256_mul_pd(r, r);
  __m256d p = _mm256_set1_pd(1.26177193074810590878e-4);
  p = _mm256_fmadd_pd(p, z, _mm256_set1_pd(3.02994407707441961300e-2));
  p = _mm256_fmadd_pd(p, z, _mm256_set1_pd(9.99999999999999999910e-1));
  p = _mm256_mul_pd(p, r);
  __m256d q = _mm256_set1_pd(3.00198505138664455042e-6);
  q = _mm256_fmadd_pd(q, z, _mm256_set1_pd(2.52448340349684104192e-3));
  q = _mm256_fmadd_pd(q, z, _mm256_set1_pd(2.27265548208155028766e-1));
  q = _mm256_fmadd_pd(q, z, _mm256_set1_pd(2.00000000000000000005e0));
  __m256d e = _mm256_div_pd(p, _mm256_sub_pd(q, p));
  e = _mm256_fmadd_pd(_mm256_set1_pd(2.0), e, _mm256_set1_pd(1.0));

  // scale by 2^n: n is integral and |n| < 2^51, so the magic-number trick
  // recovers it as an int64 exactly
  const __m256d magic = _mm256_set1_pd(6755399441055744.0);  // 2^52 + 2^51
  __m256i ni = _mm256_sub_epi64(_mm256_castpd_si256(_mm256_add_pd(n, magic)),
                                _mm256_castpd_si256(magic));
  __m256i pow2 = _mm256_slli_epi64(_mm256_add_epi64(ni, _mm256_set1_epi64x(1023)), 52);
  e = _mm256_mul_pd(e, _mm256_castsi256_pd(pow2));

  const __m256d hi = _mm256_set1_pd(709.782712893384);
  const __m256d lo = _mm256_set1_pd(-708.396418532264);
  e = _mm256_blendv_pd(e, _mm256_set1_pd(std::numeric_limits<double>::infinity()),
                       _mm256_cmp_pd(x, hi, _CMP_GT_OQ));
  e = _mm256_blendv_pd(e, _mm256_setzero_pd(), _mm256_cmp_pd(x, lo, _CMP_LT_OQ));
  return e;
}

inline __m256d log4(__m256d x) {
  // decompose x = m * 2^e with m in [sqrt(1/2), sqrt(2))
  const __m256i mant_mask = _mm256_set1_epi64x(0x000FFFFFFFFFFFFFLL);
  const __m256i half_bits = _mm256_set1_epi64x(0x3FE0000000000000LL);
  __m256i bits = _mm256_castpd_si256(x);
  __m256i e_raw = _mm256_srli_epi64(bits, 52);  // biased exponent (x > 0)
  __m256d m = _mm256_castsi256_pd(
      _mm256_or_si256(_mm256_and_si256(bits, mant_mask), half_bits));  // [0.5,1)

  // int64 exponent -> double, offset keeps it nonnegative
  const __m256d two52 = _mm256_set1_pd(4503599627370496.0);
  __m256i e_off = _mm256_add_epi64(e_raw, _mm256_set1_epi64x(1026));  // -1022+2048
  __m256d e = _mm256_sub_pd(
      _mm256_castsi256_pd(_mm256_or_si256(e_off, _mm256_castpd_si256(two52))),
      _mm256_add_pd(two52, _mm256_set1_pd(2048.0)));

  const __m256d sqrth = _mm256_set1_pd(0.70710678118654752440);
  __m256d below = _mm256_cmp_pd(m, sqrth, _CMP_LT_OQ);
  m = _mm256_add_pd(m, _mm256_and_pd(below, m));              // m *= 2 where below
  e = _mm256_sub_pd(e, _mm256_and_pd(below, _mm256_set1_pd(1.0)));
  __m256d r = _mm256_sub_pd(m, _mm256_set1_pd(1.0));

  __m256d p = _mm256_set1_pd(1.01875663804580931796e-4);
  p = _mm256_fmadd_pd(p, r, _mm256_set1_pd(4.97494994976747001425e-1));
  p = _mm256_fmadd_pd(p, r, _mm256_set1_pd(4.70579119878881725854e0));
  p = _mm256_fmadd_pd(p, r, _mm256_set1_pd(1.44989225341610930846e1));
  p = _mm256_fmadd_pd(p, r, _mm256_set1_pd(1.79368678507819816313e1));
  p = _mm256_fmadd_pd(p, r, _mm256_set1_pd(7.70838733755885391666e0));
  __m256d q = _mm256_add_pd(r, _mm256_set1_pd(1.12873587189167450590e1));
  q = _mm256_fmadd_pd(q, r, _mm256_set1_pd(4.52279145837532221105e1));
  q = _mm256_fmadd_pd(q, r, _mm256_set1_pd(8.29875266912776603211e1));
  q = _mm256_fmadd_pd(q, r, _mm256_set1_pd(7.11544750618563894466e1));
  q = _mm256_fmadd_pd(q, r, _mm256_set1_pd(2.31251620126765340583e1));

  __m256d z = _mm256_mul_pd(r, r);
  __m256d y = _mm256_mul_pd(r, _mm256_div_pd(_mm256_mul_pd(z, p), q));
  y = _mm256_fnmadd_pd(e, _mm256_set1_pd(2.121944400546905827679e-4), y);
  y = _mm256_fnmadd_pd(_mm256_set1_pd(0.5), z, y);
  __m256d res = _mm256_add_pd(r, y);
  res = _mm256_fmadd_pd(e, _mm256_set1_pd(0.693359375), res);
  return res;
}

inline double hsum(__m256d v) {
  __m128d lo = _mm256_castpd256_pd128(v);
  __m128d hi = _mm256_extractf128_pd(v, 1);
  lo = _mm_add_pd(lo, hi);
  return _mm_cvtsd_f64(_mm_add_sd(lo, _mm_unpackhi_pd(lo, lo)));
}

}  // namespace

void exp_v(const double* x, double* y, std::size_t n) {
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4)
    _mm256_storeu_pd(y + i, exp4(_mm256_loadu_pd(x + i)));
  for (; i < n; ++i) y[i] = std::exp(x[i]);
}

void log_v(const double* x, double* y, std::size_t n) {
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4)
    _mm256_storeu_pd(y + i, log4(_mm256_loadu_pd(x + i)));
  for (; i < n; ++i) y[i] = std::log(x[i]);
}

double entropy_bits(const double* p, std::size_t n) {
  __m256d acc = _mm256_setzero_pd();
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    __m256d v = _mm256_loadu_pd(p + i);
    __m256d pos = _mm256_cmp_pd(v, _mm256_setzero_pd(), _CMP_GT_OQ);
    // log of nonpositive lanes is garbage; mask the product to 0 there
    __m256d safe = _mm256_blendv_pd(_mm256_set1_pd(1.0), v, pos);
    __m256d term = _mm256_mul_pd(v, log4(safe));
    acc = _mm256_sub_pd(acc, _mm256_and_pd(term, pos));
  }
  double s = hsum(acc);
  for (; i < n; ++i)
    if (p[i] > 0.0) s -= p[i] * std::log(p[i]);
  return s / std::log(2.0);
}

double logsumexp(const double* x, std::size_t n) {
  double m = -std::numeric_limits<double>::infinity();
  std::size_t i = 0;
  if (n >= 4) {
    __m256d vm = _mm256_loadu_pd(x);
    for (i = 4; i + 4 <= n; i += 4) vm = _mm256_max_pd(vm, _mm256_loadu_pd(x + i));
    alignas(32) double tmp[4];
    _mm256_store_pd(tmp, vm);
    m = std::max(std::max(tmp[0], tmp[1]), std::max(tmp[2], tmp[3]));
  }
  for (std::size_t j = i; j < n; ++j) m = std::max(m, x[j]);
  if (!std::isfinite(m)) return m;

  __m256d acc = _mm256_setzero_pd();
  const __m256d vmax = _mm256_set1_pd(m);
  std::size_t k = 0;
  for (; k + 4 <= n; k += 4)
    acc = _mm256_add_pd(acc, exp4(_mm256_sub_pd(_mm256_loadu_pd(x + k), vmax)));
  double s = hsum(acc);
  for (; k < n; ++k) s += std::exp(x[k] - m);
  return m + std::log(s);
}

}  // namespace ealab::kernels::avx2
