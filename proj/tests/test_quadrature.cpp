#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <numbers>
#include <numeric>
#include <vector>

#include "riceband/quadrature.hpp"

using namespace riceband;

TEST_CASE("Gauss-Legendre is exact on polynomials of degree 2n-1") {
  const QuadRule& rule = gauss_legendre(5);
  double s = 0.0;
  for (std::size_t i = 0; i < rule.nodes.size(); ++i) {
    s += rule.weights[i] * std::pow(rule.nodes[i], 8);
  }
  CHECK(s == doctest::Approx(2.0 / 9.0).epsilon(1e-14));

  const QuadRule mapped = gauss_legendre(8, 0.0, 2.0);
  const double val = integrate([](double x) { return x * x * x; }, mapped);
  CHECK(val == doctest::Approx(4.0).epsilon(1e-14));
}

TEST_CASE("composite rule matches a smooth integral") {
  const QuadRule rule = composite_gauss_legendre(16, 10, 0.0, std::numbers::pi);
  const double val = integrate([](double x) { return std::sin(x); }, rule);
  CHECK(val == doctest::Approx(2.0).epsilon(1e-13));
}

TEST_CASE("axis_rule keeps the requested node count") {
  const QuadRule rule = axis_rule(100, -1.0, 1.0);
  CHECK(rule.nodes.size() >= 100);
  double w = std::accumulate(rule.weights.begin(), rule.weights.end(), 0.0);
  CHECK(w == doctest::Approx(2.0).epsilon(1e-14));
}

TEST_CASE("adaptive quadrature resolves a sharp peak") {
  // integral of 1/(eps^2 + x^2) over [-1, 1] = 2 atan(1/eps)/eps
  const double eps = 1e-3;
  const double val = integrate_adaptive(
      [eps](double x) { return 1.0 / (eps * eps + x * x); }, -1.0, 1.0, 1e-9);
  CHECK(val == doctest::Approx(2.0 * std::atan(1.0 / eps) / eps).epsilon(1e-11));
}

TEST_CASE("pairwise sum equals sequential sum on benign data") {
  std::vector<double> v(1237);
  for (std::size_t i = 0; i < v.size(); ++i) v[i] = 1.0 / static_cast<double>(i + 1);
  const double seq = std::accumulate(v.begin(), v.end(), 0.0);
  CHECK(pairwise_sum(v) == doctest::Approx(seq).epsilon(1e-15));
}

TEST_CASE("truncated cosine rule matches 2 sin(Rt)/t") {
  for (double R : {3.0, 10.0, 47.5}) {
    const TruncatedCosRule rule(R, 32);
    for (double t : {1e-8, 0.3, 1.0, 2.4}) {
      const double exact = 2.0 * std::sin(R * t) / t;
      CHECK(rule(t) == doctest::Approx(exact).epsilon(1e-10));
    }
    CHECK(rule(0.0) == doctest::Approx(2.0 * R).epsilon(1e-12));
  }
}
