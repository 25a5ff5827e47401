#include <cmath>
#include <vector>

#include "doctest.h"
#include "pipedg/legendre.hpp"
#include "pipedg/quadrature.hpp"

using namespace pipedg;

namespace {

double monomial_integral(int m) {  // over [-1, 1]
  return m % 2 == 1 ? 0.0 : 2.0 / (m + 1);
}

} // namespace

TEST_SUITE("quadrature") {

TEST_CASE("gauss rules integrate polynomials up to degree 2n-1 exactly") {
  for (int n = 1; n <= 8; ++n) {
    const QuadratureRule& rule = gauss_legendre(n);
    REQUIRE(rule.size() == static_cast<std::size_t>(n));
    for (int m = 0; m <= 2 * n - 1; ++m) {
      double sum = 0.0;
      for (std::size_t q = 0; q < rule.size(); ++q)
        sum += rule.weights[q] * std::pow(rule.points[q], m);
      CHECK(std::abs(sum - monomial_integral(m)) <= 1e-13);
    }
  }
}

TEST_CASE("two and three point nodes match the closed forms") {
  const QuadratureRule& two = gauss_legendre(2);
  CHECK(std::abs(two.points[0] + 1.0 / std::sqrt(3.0)) <= 1e-15);
  CHECK(std::abs(two.points[1] - 1.0 / std::sqrt(3.0)) <= 1e-15);
  CHECK(std::abs(two.weights[0] - 1.0) <= 1e-15);
  CHECK(std::abs(two.weights[1] - 1.0) <= 1e-15);

  const QuadratureRule& three = gauss_legendre(3);
  CHECK(std::abs(three.points[0] + std::sqrt(0.6)) <= 1e-15);
  CHECK(std::abs(three.points[1]) <= 1e-15);
  CHECK(std::abs(three.points[2] - std::sqrt(0.6)) <= 1e-15);
  CHECK(std::abs(three.weights[0] - 5.0 / 9.0) <= 1e-15);
  CHECK(std::abs(three.weights[1] - 8.0 / 9.0) <= 1e-15);
}

TEST_CASE("nodes are symmetric with positive weights summing to 2") {
  for (int n = 1; n <= 10; ++n) {
    const QuadratureRule& rule = gauss_legendre(n);
    double wsum = 0.0;
    for (std::size_t q = 0; q < rule.size(); ++q) {
      CHECK(rule.weights[q] > 0.0);
      CHECK(std::abs(rule.points[q] + rule.points[rule.size() - 1 - q]) <=
            1e-15);
      wsum += rule.weights[q];
    }
    CHECK(std::abs(wsum - 2.0) <= 1e-14);
  }
}

TEST_CASE("legendre endpoint values and derivatives") {
  std::vector<double> p, dp;
  legendre_values(5, 1.0, p);
  for (int j = 0; j <= 5; ++j) CHECK(p[j] == doctest::Approx(1.0));
  legendre_values(5, -1.0, p);
  for (int j = 0; j <= 5; ++j)
    CHECK(p[j] == doctest::Approx(j % 2 == 0 ? 1.0 : -1.0));
  legendre_values_derivatives(5, 1.0, p, dp);
  for (int j = 0; j <= 5; ++j)
    CHECK(std::abs(dp[j] - 0.5 * j * (j + 1)) <= 1e-12);
}

TEST_CASE("element basis is orthonormal on an arbitrary element") {
  const int k = 5;
  ElementBasis basis(k, 0.3, 0.7);
  const QuadratureRule& rule = gauss_legendre(k + 2);
  std::vector<double> phi;
  std::vector<std::vector<double>> gram(k + 1, std::vector<double>(k + 1, 0.0));
  for (std::size_t q = 0; q < rule.size(); ++q) {
    double x = 0.3 + 0.5 * 0.7 * (rule.points[q] + 1.0);
    basis.values(x, phi);
    for (int i = 0; i <= k; ++i)
      for (int j = 0; j <= k; ++j)
        gram[i][j] += 0.5 * 0.7 * rule.weights[q] * phi[i] * phi[j];
  }
  for (int i = 0; i <= k; ++i)
    for (int j = 0; j <= k; ++j)
      CHECK(std::abs(gram[i][j] - (i == j ? 1.0 : 0.0)) <= 1e-12);
}

TEST_CASE("element basis derivatives carry the chain-rule factor") {
  ElementBasis basis(3, 2.0, 0.5);
  std::vector<double> phi, dphi, lo, hi;
  basis.values_derivatives(2.2, phi, dphi);
  // centered difference as an independent check
  const double step = 1e-6;
  basis.values(2.2 - step, lo);
  basis.values(2.2 + step, hi);
  for (int j = 0; j <= 3; ++j)
    CHECK(std::abs(dphi[j] - (hi[j] - lo[j]) / (2 * step)) <= 1e-6);
}

} // TEST_SUITE
