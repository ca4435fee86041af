#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "ealab/special_fn.hpp"

#include <boost/multiprecision/cpp_bin_float.hpp>

#include <cmath>

using namespace ealab;
using big = boost::multiprecision::cpp_bin_float_50;

namespace {

// independent high-precision evaluation of the same series, run well past the
// double-precision stopping point
big gauss_ref(int a, int b, int c, double z, int terms) {
  big sum = 0, t = 1 / boost::multiprecision::tgamma(big(c));
  for (int k = 0; k < terms; ++k) {
    sum += t;
    t *= big(a + k) * big(b + k) * big(z) / (big(k + 1) * big(c + k));
  }
  return sum;
}

big confluent_ref(int a, int b, double z, int terms) {
  big sum = 0, t = 1 / boost::multiprecision::tgamma(big(b));
  for (int k = 0; k < terms; ++k) {
    sum += t;
    t *= big(a + k) * big(z) / (big(k + 1) * big(b + k));
  }
  return sum;
}

}  // namespace

TEST_CASE("log_gamma at integer points") {
  CHECK(log_gamma(1.0) == doctest::Approx(0.0));
  CHECK(log_gamma(2.0) == doctest::Approx(0.0));
  // frozen: lgamma(11) = ln(10!)
  CHECK(log_gamma(11.0) == doctest::Approx(15.10441257307551529522571).epsilon(1e-15));
  CHECK_THROWS_AS(log_gamma(0.0), std::domain_error);
  CHECK_THROWS_AS(log_gamma(-3.5), std::domain_error);
}

TEST_CASE("erfc values and reflection symmetry") {
  CHECK(ealab::erfc(0.0) == doctest::Approx(1.0));
  // frozen: ealab::erfc(0.43)
  CHECK(ealab::erfc(0.43) == doctest::Approx(0.543113305450459695012558).epsilon(1e-15));
  for (double x : {0.1, 0.7, 1.9, 3.4})
    CHECK(ealab::erfc(-x) == doctest::Approx(2.0 - ealab::erfc(x)).epsilon(1e-15));
}

TEST_CASE("gauss_2f1_regularized: frozen oracle value") {
  // frozen: F_R(3,2,1,0.1)
  SeriesResult r = gauss_2f1_regularized(3, 2, 1, 0.1);
  CHECK(r.value == doctest::Approx(1.828989483310470964791952).epsilon(1e-14));
  CHECK(r.terms_used >= 2);
}

TEST_CASE("confluent_1f1_regularized: frozen oracle value") {
  // frozen: 1F~1(3,1,0.5)
  SeriesResult r = confluent_1f1_regularized(3, 1, 0.5);
  CHECK(r.value == doctest::Approx(3.503532700237772312053383).epsilon(1e-14));
}

TEST_CASE("gauss series: value and truncation bound against 50-digit reference") {
  struct Point {
    int a, b, c;
    double z;
  };
  for (const Point& p : {Point{1, 1, 1, 0.3}, Point{5, 7, 2, 0.6}, Point{40, 25, 10, 0.9},
                         Point{120, 80, 41, 0.97}, Point{2, 300, 299, 0.5}}) {
    SeriesResult r = gauss_2f1_regularized(p.a, p.b, p.c, p.z);
    big ref = gauss_ref(p.a, p.b, p.c, p.z, 4 * r.terms_used + 64);
    double refd = double(ref);
    double err = std::fabs(r.value - refd);
    // the reported tail bound must cover the real truncation error, plus an
    // allowance for rounding of the running sum that grows with term count
    double round_allow = std::max(1e-13, 2e-15 * r.terms_used) * std::fabs(refd);
    CHECK(err <= r.truncation_bound + round_allow);
    CHECK(err <= std::max(1e-12, 2e-15 * r.terms_used) * std::fabs(refd));
  }
}

TEST_CASE("confluent series: value and truncation bound against 50-digit reference") {
  struct Point {
    int a, b;
    double z;
  };
  for (const Point& p : {Point{1, 1, 0.2}, Point{6, 3, 4.0}, Point{30, 12, 25.0},
                         Point{100, 51, 60.0}}) {
    SeriesResult r = confluent_1f1_regularized(p.a, p.b, p.z);
    big ref = confluent_ref(p.a, p.b, p.z, 4 * r.terms_used + 64);
    double refd = double(ref);
    CHECK(std::fabs(r.value - refd) <= r.truncation_bound + 1e-13 * std::fabs(refd));
    CHECK(r.value == doctest::Approx(refd).epsilon(1e-12));
  }
}

TEST_CASE("log variants agree with the direct sums") {
  CHECK(std::exp(log_gauss_2f1_regularized(8, 5, 3, 0.4)) ==
        doctest::Approx(gauss_2f1_regularized(8, 5, 3, 0.4).value).epsilon(1e-13));
  CHECK(std::exp(log_confluent_1f1_regularized(9, 4, 2.5)) ==
        doctest::Approx(confluent_1f1_regularized(9, 4, 2.5).value).epsilon(1e-13));
  // log form must survive parameters whose direct value overflows
  double lg = log_gauss_2f1_regularized(900, 700, 1, 0.99);
  CHECK(std::isfinite(lg));
  CHECK(lg > 700.0 * std::log(10.0) / 10.0);  // clearly beyond double range
}

TEST_CASE("domain guards") {
  CHECK_THROWS_AS(gauss_2f1_regularized(0, 1, 1, 0.5), std::domain_error);
  CHECK_THROWS_AS(gauss_2f1_regularized(1, 1, 1, 1.0), std::domain_error);
  CHECK_THROWS_AS(gauss_2f1_regularized(1, 1, 1, -0.1), std::domain_error);
  CHECK_THROWS_AS(confluent_1f1_regularized(1, 0, 0.5), std::domain_error);
  CHECK_THROWS_AS(confluent_1f1_regularized(1, 1, -1.0), std::domain_error);
}

TEST_CASE("z = 0 degenerate sums") {
  CHECK(gauss_2f1_regularized(4, 9, 3, 0.0).value ==
        doctest::Approx(std::exp(-log_gamma(3.0))).epsilon(1e-15));
  CHECK(confluent_1f1_regularized(4, 5, 0.0).value ==
        doctest::Approx(std::exp(-log_gamma(5.0))).epsilon(1e-15));
}
