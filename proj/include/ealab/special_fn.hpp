#pragma once
// Scalar special functions: log-gamma, erfc, and the two regularized
// hypergeometric series patterns needed by the Fock-basis matrix elements
// (integer parameters, small nonnegative argument). Series are accumulated
// in log space so large integer parameters cannot overflow mid-sum.
#include <stdexcept>

namespace ealab {

struct SeriesResult {
  double value;            // exp of the log-space sum (may overflow to inf for extreme params)
  int terms_used;          // >= 1
  double truncation_bound; // bound on the absolute tail error of `value`
};

class truncation_error : public std::runtime_error {
 public:
  truncation_error(const char* what, SeriesResult partial)
      : std::runtime_error(what), partial_result(partial) {}
  SeriesResult partial_result;
};

double log_gamma(double x);  // x > 0
double erfc(double x);

// F_R(a,b,c,z) = sum_k (a)_k (b)_k z^k / [k! Gamma(c+k)],  z in [0,1)
SeriesResult gauss_2f1_regularized(int a, int b, int c, double z);
// 1F~1(a,b,z) = sum_k (a)_k z^k / [k! Gamma(b+k)],  z >= 0
SeriesResult confluent_1f1_regularized(int a, int b, double z);

// log of the same sums, for callers that combine them with huge prefactors
double log_gauss_2f1_regularized(int a, int b, int c, double z);
double log_confluent_1f1_regularized(int a, int b, double z);

}  // namespace ealab
