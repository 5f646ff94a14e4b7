#include <doctest.h>

#include <cmath>
#include <numbers>

#include "madelung/airy.hpp"
#include "madelung/errors.hpp"

using namespace madelung;

namespace {

// Maclaurin series in extended precision: Ai(x) = c1 f(x) - c2 g(x) with
// f = sum 3^k (1/3)_k x^{3k} / (3k)!, g = sum 3^k (2/3)_k x^{3k+1} / (3k+1)!.
double series_oracle(double xd) {
  const long double x = xd;
  const long double c1 = 1.0L / (std::pow(3.0L, 2.0L / 3.0L) * std::tgamma(2.0L / 3.0L));
  const long double c2 = 1.0L / (std::pow(3.0L, 1.0L / 3.0L) * std::tgamma(1.0L / 3.0L));
  long double f = 0, g = 0, tf = 1, tg = x;
  for (int k = 0; k < 200; ++k) {
    f += tf;
    g += tg;
    tf *= x * x * x / ((3.0L * k + 2) * (3.0L * k + 3));
    tg *= x * x * x / ((3.0L * k + 3) * (3.0L * k + 4));
  }
  return static_cast<double>(c1 * f - c2 * g);
}

// Ai'' = x Ai integrated with classical RK4 from x = 0 towards negative x,
// where both solutions stay bounded.
double ode_oracle(double x_end) {
  const long double c1 = 1.0L / (std::pow(3.0L, 2.0L / 3.0L) * std::tgamma(2.0L / 3.0L));
  const long double c2 = 1.0L / (std::pow(3.0L, 1.0L / 3.0L) * std::tgamma(1.0L / 3.0L));
  long double y = c1, v = -c2, x = 0;
  const int n = 200000;
  const long double h = static_cast<long double>(x_end) / n;
  for (int i = 0; i < n; ++i) {
    const long double k1y = v, k1v = x * y;
    const long double k2y = v + 0.5L * h * k1v, k2v = (x + 0.5L * h) * (y + 0.5L * h * k1y);
    const long double k3y = v + 0.5L * h * k2v, k3v = (x + 0.5L * h) * (y + 0.5L * h * k2y);
    const long double k4y = v + h * k3v, k4v = (x + h) * (y + h * k3y);
    y += h / 6 * (k1y + 2 * k2y + 2 * k3y + k4y);
    v += h / 6 * (k1v + 2 * k2v + 2 * k3v + k4v);
    x += h;
  }
  return static_cast<double>(y);
}

}  // namespace

TEST_CASE("value at the origin") {
  const double want = 1.0 / (std::pow(3.0, 2.0 / 3.0) * std::tgamma(2.0 / 3.0));
  CHECK(want == doctest::Approx(0.3550280538878172).epsilon(1e-15));
  CHECK(std::fabs(airy_ai(0.0) - want) <= 1e-14);
}

TEST_CASE("agrees with the extended-precision series") {
  for (double x = -8.0; x <= 8.0; x += 0.37) {
    CAPTURE(x);
    CHECK(std::fabs(airy_ai(x) - series_oracle(x)) <= 1e-10);
  }
}

TEST_CASE("agrees with direct integration on the oscillatory side") {
  for (double x : {-4.0, -4.6, -7.5, -12.0, -19.3, -25.0, -30.0}) {
    CAPTURE(x);
    CHECK(std::fabs(airy_ai(x) - ode_oracle(x)) <= 1e-10);
  }
}

TEST_CASE("decays on the right") {
  CHECK(airy_ai(10.0) > 0.0);
  CHECK(airy_ai(10.0) < 1e-9);
  double prev = airy_ai(4.0);
  for (double x = 4.5; x <= 30.0; x += 0.5) {
    const double v = airy_ai(x);
    CHECK(v > 0.0);
    CHECK(v < prev);
    prev = v;
  }
}

TEST_CASE("both sides of the series/asymptotic switch points") {
  for (double x0 : {-8.0, 5.0}) {
    for (double x : {x0 - 1e-6, x0 + 1e-6}) {
      CAPTURE(x);
      CHECK(std::fabs(airy_ai(x) - series_oracle(x)) <= 1e-10);
    }
  }
}

TEST_CASE("first zero by bisection") {
  double lo = -2.5, hi = -2.2;
  REQUIRE(airy_ai(lo) * airy_ai(hi) < 0.0);
  for (int i = 0; i < 200; ++i) {
    const double mid = 0.5 * (lo + hi);
    (airy_ai(lo) * airy_ai(mid) <= 0.0 ? hi : lo) = mid;
  }
  CHECK(0.5 * (lo + hi) == doctest::Approx(-2.338107410459767).epsilon(1e-12));
  CHECK(kAiryFirstZero == doctest::Approx(0.5 * (lo + hi)).epsilon(1e-12));
}

TEST_CASE("range is limited") {
  CHECK_THROWS_AS(airy_ai(30.5), InvalidArgument);
  CHECK_THROWS_AS(airy_ai(-31.0), InvalidArgument);
  CHECK_THROWS_AS(airy_ai(NAN), InvalidArgument);
}
