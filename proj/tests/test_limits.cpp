#include <doctest.h>

#include <cmath>

#include "mallows/errors.hpp"
#include "mallows/limits.hpp"

using namespace mallows;

namespace {

// Naive form of the scaling-constant integral, finite only for moderate beta:
// sqrt(beta/(6 sinh(b/2))) * int sqrt(cosh(b/2) + 2 cosh(b(2x-1)/2)) dx on a
// fixed composite-Simpson grid. Independent of the adaptive routine.
double j_bar_naive(double beta, int intervals = 20000) {
  auto f = [beta](double x) {
    return std::sqrt(std::cosh(0.5 * beta) + 2.0 * std::cosh(0.5 * beta * (2.0 * x - 1.0)));
  };
  const double h = 1.0 / intervals;
  double sum = f(0.0) + f(1.0);
  for (int i = 1; i < intervals; ++i) sum += (i % 2 ? 4.0 : 2.0) * f(i * h);
  const double integral = sum * h / 3.0;
  return std::sqrt(beta / (6.0 * std::sinh(0.5 * beta))) * integral;
}

}  // namespace

TEST_CASE("j_bar approaches 1 at tiny beta") {
  CHECK(kJBarAtZero == 1.0);
  CHECK(std::abs(j_bar(1e-6).value - kJBarAtZero) < 1e-4);
}

TEST_CASE("j_bar(beta)/sqrt(beta) approaches 1/sqrt(6)") {
  const double ratio = j_bar(400.0, 1e-10).value / 20.0;
  const double limit = 1.0 / std::sqrt(6.0);
  CHECK(std::abs(ratio - limit) / limit < 0.01);
}

TEST_CASE("overflow-safe form matches the naive cosh form for moderate beta") {
  for (double beta : {0.5, 2.0, 10.0, 30.0}) {
    const double safe = j_bar(beta, 1e-12).value;
    const double naive = j_bar_naive(beta);
    CHECK(std::abs(safe - naive) / naive < 1e-10);
  }
}

TEST_CASE("j_bar is positive and continuous across the test grid") {
  double prev = 0.0;
  for (double beta : {0.01, 0.1, 1.0, 2.0, 5.0, 10.0, 50.0, 100.0}) {
    const QuadratureResult r = j_bar(beta);
    CHECK(r.value > 0.0);
    CHECK(std::isfinite(r.value));
    CHECK(r.abs_error_estimate >= 0.0);
    CHECK(r.value > prev * 0.999);  // increasing in beta on this grid
    prev = r.value;
    // nearby evaluation stays nearby
    const double nudged = j_bar(beta * (1.0 + 1e-6)).value;
    CHECK(std::abs(nudged - r.value) < 1e-4 * r.value);
  }
}

TEST_CASE("halving the tolerance moves the value by at most the error estimate") {
  for (double beta : {0.7, 3.0, 40.0}) {
    double tol = 1e-6;
    QuadratureResult prev = j_bar(beta, tol);
    for (int round = 0; round < 6; ++round) {
      tol *= 0.5;
      const QuadratureResult next = j_bar(beta, tol);
      CHECK(std::abs(next.value - prev.value) <= prev.abs_error_estimate + 1e-15);
      prev = next;
    }
  }
}

TEST_CASE("integrand factor stays below sqrt(5)") {
  const double bound = std::sqrt(5.0);
  for (double beta : {0.01, 1.0, 10.0, 100.0, 400.0}) {
    const double denom = 1.0 + std::exp(-beta);
    for (int i = 0; i <= 10000; ++i) {
      const double x = static_cast<double>(i) / 10000.0;
      const double factor =
          std::sqrt(1.0 + 2.0 * (std::exp(beta * (x - 1.0)) + std::exp(-beta * x)) / denom);
      CHECK(factor < bound);
    }
  }
}

TEST_CASE("j_bar argument and budget validation") {
  CHECK_THROWS_AS(j_bar(0.0), std::invalid_argument);
  CHECK_THROWS_AS(j_bar(-2.0), std::invalid_argument);
  CHECK_THROWS_AS(j_bar(5.0, -1.0), std::invalid_argument);
  CHECK_THROWS_AS(j_bar(5.0, 1e-14, 7), BudgetExceededError);
}

TEST_CASE("weak law constant") {
  CHECK(weak_law_constant() == doctest::Approx(0.8164965809277259).epsilon(1e-15));
  CHECK(weak_law_constant() == doctest::Approx(2.0 / std::sqrt(6.0)).epsilon(1e-15));
  const double via_quadrature = 2.0 * j_bar(400.0).value / 20.0;
  CHECK(std::abs(via_quadrature - weak_law_constant()) < 0.01 * weak_law_constant());
}

TEST_CASE("euler_z matches the truncated product") {
  CHECK(euler_z(1e-9) == doctest::Approx(1.0).epsilon(1e-8));
  CHECK(euler_z(0.5) == doctest::Approx(3.462746619).epsilon(1e-9));
  CHECK_THROWS_AS(euler_z(0.0), std::invalid_argument);
  CHECK_THROWS_AS(euler_z(1.0), std::invalid_argument);

  // partial products of 1/Z decrease monotonically toward the limit
  // (non-strictly once q^k has left double precision)
  for (double q : {0.3, 0.7, 0.9}) {
    double partial = 1.0;
    double prev = 2.0;
    for (int k = 1; k <= 400; ++k) {
      partial *= 1.0 - std::pow(q, k);
      CHECK(partial <= prev);
      prev = partial;
    }
    CHECK(partial == doctest::Approx(1.0 / euler_z(q)).epsilon(1e-10));
  }
}
