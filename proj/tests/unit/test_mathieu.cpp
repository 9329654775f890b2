#include <Eigen/Dense>

#include <cmath>
#include <numbers>
#include <vector>

#include "doctest.h"
#include "qrev/error.hpp"
#include "qrev/mathieu.hpp"

using namespace qrev;

namespace {

// Dense eigen-solve of the cos(2kx) matrix with 101 modes, independent of the
// bisection solver used by the library.
double dense_even_a0(double q) {
  const int n = 101;
  Eigen::MatrixXd m = Eigen::MatrixXd::Zero(n, n);
  for (int k = 0; k < n; ++k) m(k, k) = 4.0 * k * k;
  for (int k = 0; k + 1 < n; ++k) {
    const double c = k == 0 ? std::numbers::sqrt2 * q : q;
    m(k, k + 1) = c;
    m(k + 1, k) = c;
  }
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(m, Eigen::EigenvaluesOnly);
  return es.eigenvalues()(0);
}

double a(double nu, double q) { return char_value(MathieuOrder::even(nu), q); }
double b(double nu, double q) { return char_value(MathieuOrder::odd(nu), q); }

}  // namespace

TEST_CASE("zero q gives the squared order") {
  for (int i = 0; i <= 20; ++i) {
    const double nu = 0.5 * i;
    CHECK(std::abs(a(nu, 0.0) - nu * nu) <= 1e-12 * std::max(1.0, nu * nu));
    if (nu >= 1.0) CHECK(std::abs(b(nu, 0.0) - nu * nu) <= 1e-12 * std::max(1.0, nu * nu));
  }
  CHECK(a(0.3, 0.0) == doctest::Approx(0.09).epsilon(1e-14));
  CHECK(a(3.7, 0.0) == doctest::Approx(13.69).epsilon(1e-14));
}

TEST_CASE("exact values against a dense oracle and tabulated values") {
  CHECK(a(0, 1.0) == doctest::Approx(dense_even_a0(1.0)).epsilon(1e-12));
  CHECK(a(0, 1.0) == doctest::Approx(-0.4551).epsilon(1e-4));
  CHECK(a(0, 25.0) == doctest::Approx(dense_even_a0(25.0)).epsilon(1e-12));
  // Standard tables at q = 1 and q = 5.
  CHECK(a(1, 1.0) == doctest::Approx(1.859108072).epsilon(1e-9));
  CHECK(b(1, 1.0) == doctest::Approx(-0.110248816).epsilon(1e-8));
  CHECK(b(2, 1.0) == doctest::Approx(3.917024772).epsilon(1e-9));
  CHECK(a(2, 1.0) == doctest::Approx(4.371300982).epsilon(1e-9));
  CHECK(a(0, 5.0) == doctest::Approx(-5.800046020).epsilon(1e-9));
  CHECK(b(2, 5.0) == doctest::Approx(2.099460445).epsilon(1e-9));
}

TEST_CASE("fractional orders approach the band edges") {
  const double q = 3.0;
  const double eps = 1e-7;
  CHECK(a(1.0 - eps, q) == doctest::Approx(b(1, q)).epsilon(1e-5));
  CHECK(a(1.0 + eps, q) == doctest::Approx(a(1, q)).epsilon(1e-5));
  CHECK(a(2.0 - eps, q) == doctest::Approx(b(2, q)).epsilon(1e-5));
  CHECK(a(2.0 + eps, q) == doctest::Approx(a(2, q)).epsilon(1e-5));
  CHECK(a(eps, q) == doctest::Approx(a(0, q)).epsilon(1e-5));
  // Inside a band the curve is monotone.
  CHECK(a(0.2, q) < a(0.6, q));
  CHECK(a(1.2, q) < a(1.6, q));
  CHECK(b(2.5, q) == a(2.5, q));
}

TEST_CASE("interlacing a_nu <= b_{nu+1}") {
  for (double q : {0.1, 1.0, 10.0, 100.0}) {
    for (int nu = 0; nu <= 20; ++nu) {
      const double an = a(nu, q);
      const double bn1 = b(nu + 1, q);
      CHECK(an <= bn1 + 4.0 * std::numeric_limits<double>::epsilon() * std::max(1.0, std::abs(an)));
    }
  }
}

TEST_CASE("continuity in q") {
  for (double q : {0.5, 5.0, 50.0}) {
    for (double nu : {0.0, 2.0, 3.5, 7.0}) {
      CHECK(std::abs(a(nu, q + 1e-6) - a(nu, q)) < 1e-4);
    }
  }
}

TEST_CASE("small-q series") {
  const double value = char_value(MathieuOrder::even(5), 0.5, MathieuMethod::series_small_q);
  CHECK(value == doctest::Approx(25.0 + 0.25 / 48.0).epsilon(1e-15));
  CHECK(std::abs(value - a(5, 0.5)) / a(5, 0.5) < 1e-4);
  for (double nu : {5.0, 6.0, 7.5, 10.0}) {
    for (double q : {0.1, 0.3, 0.5}) {
      const double s = char_value(MathieuOrder::even(nu), q, MathieuMethod::series_small_q);
      CHECK(std::abs(s - a(nu, q)) / a(nu, q) < 1e-3);
    }
  }
  CHECK(char_value(MathieuOrder::even(1.5), 0.2, MathieuMethod::series_small_q) ==
        doctest::Approx(small_q_series(1.5, 0.2)));
  const auto routed = characteristic(MathieuOrder::even(3), 0.5, MathieuMethod::series_small_q);
  CHECK(routed.method == MathieuMethod::exact);
  CHECK_THROWS_AS(char_value(MathieuOrder::even(5), 1.5, MathieuMethod::series_small_q), DomainError);
  CHECK_THROWS_AS(char_value(MathieuOrder::even(3.2), 0.5, MathieuMethod::series_small_q), DomainError);
}

TEST_CASE("large-q series") {
  CHECK(char_value(MathieuOrder::even(0), 100.0, MathieuMethod::series_large_q) ==
        doctest::Approx(-180.253125).epsilon(1e-14));
  for (double q : {100.0, 200.0, 400.0}) {
    for (int nu = 0; nu <= 3; ++nu) {
      const double s = char_value(MathieuOrder::even(nu), q, MathieuMethod::series_large_q);
      const double e = a(nu, q);
      CHECK(std::abs(s - e) / std::abs(e) < 1e-2);
      const double sb = char_value(MathieuOrder::odd(nu + 1), q, MathieuMethod::series_large_q);
      CHECK(std::abs(sb - b(nu + 1, q)) / std::abs(e) < 1e-2);
    }
  }
  CHECK_THROWS_AS(char_value(MathieuOrder::even(0), 5.0, MathieuMethod::series_large_q), DomainError);
  CHECK_THROWS_AS(char_value(MathieuOrder::even(6), 100.0, MathieuMethod::series_large_q), DomainError);
}

TEST_CASE("band width asymptotics") {
  const double direct = 32.0 * std::sqrt(2.0 / std::numbers::pi) * std::pow(100.0, 0.75) * std::exp(-40.0);
  CHECK(band_width(0, 100.0) == doctest::Approx(direct).epsilon(1e-12));
  CHECK(band_width(0, 100.0) == doctest::Approx(3.43e-15).epsilon(1e-2));
  for (int nu : {0, 1}) {
    const double exact = b(nu + 1, 50.0) - a(nu, 50.0);
    const double ratio = band_width(nu, 50.0) / exact;
    CHECK(ratio < 1.5);
    CHECK(ratio > 1.0 / 1.5);
  }
  for (int nu = 0; nu <= 3; ++nu) {
    double previous = band_width(nu, 25.0);
    for (double q = 26.0; q <= 400.0; q += 1.0) {
      const double w = band_width(nu, q);
      CHECK(w > 0.0);
      CHECK(w < previous);
      previous = w;
    }
  }
}

TEST_CASE("order derivatives") {
  auto d = char_derivatives(MathieuOrder::even(3), 0.0, 3);
  CHECK(d[0] == doctest::Approx(6.0).epsilon(1e-8));
  CHECK(d[1] == doctest::Approx(2.0).epsilon(1e-6));
  CHECK(std::abs(d[2]) < 1e-3);

  // Analytic derivatives of nu^2 + q^2 / (2 (nu^2 - 1)).
  const double nu = 5.5;
  const double q = 0.5;
  const double u = nu * nu - 1.0;
  const double d1 = 2.0 * nu - q * q * nu / (u * u);
  const double d2 = 2.0 - q * q * (1.0 / (u * u) - 4.0 * nu * nu / (u * u * u));
  const double d3 = -q * q * (-12.0 * nu / (u * u * u) + 24.0 * nu * nu * nu / (u * u * u * u));
  d = char_derivatives(MathieuOrder::even(nu), q, 3);
  CHECK(d[0] == doctest::Approx(d1).epsilon(1e-3));
  CHECK(d[1] == doctest::Approx(d2).epsilon(1e-3));
  // The third derivative is tiny; the series itself is only good to O(q^4).
  CHECK(std::abs(d[2] - d3) < 1e-3 * std::max(1.0, std::abs(d3)));

  // Below the crossover the ladder of integer levels is used: at large q the
  // levels follow -2q + 2s sqrt(q) - (s^2+1)/8 with s = 2 nu + 1.
  d = char_derivatives(MathieuOrder::even(1), 400.0, 2);
  CHECK(d[0] == doctest::Approx(4.0 * std::sqrt(400.0) - 0.5 * 3.0).epsilon(1e-3));
  CHECK(d[1] == doctest::Approx(-1.0).epsilon(0.1));
}

TEST_CASE("crossover order") {
  CHECK(crossover_order(2.0) == 2);
  CHECK(crossover_order(50.0) == 10);
  CHECK(crossover_order(0.1) == 0);
}

TEST_CASE("order validation") {
  CHECK_THROWS_AS(MathieuOrder::even(-1.0), DomainError);
  CHECK_THROWS_AS(MathieuOrder::odd(0.0), DomainError);
  CHECK_THROWS_AS(char_value(MathieuOrder::even(1.0), -0.5), DomainError);
  CHECK(parse_mathieu_method("series_large_q") == MathieuMethod::series_large_q);
  CHECK_THROWS_AS(parse_mathieu_method("bogus"), DomainError);
}
