#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <numbers>
#include <vector>

#include "riceband/kac_rice.hpp"
#include "riceband/sphere.hpp"

using namespace riceband;

namespace {

// unit-variance field moments with a constant gradient covariance
MomentField constant_moments(int d, std::vector<double> sigma_matrix, double mean = 0.0) {
  MomentField f;
  f.dim = d;
  f.mean = [mean](std::span<const double>) { return mean; };
  f.sigma = [](std::span<const double>) { return 1.0; };
  f.sigma_matrix = [m = std::move(sigma_matrix)](std::span<const double>, std::span<double> out) {
    std::copy(m.begin(), m.end(), out.begin());
  };
  return f;
}

}  // namespace

TEST_CASE("oscillatory formula measures a straight line") {
  // zero set of g(x, y) = x inside [-1,1]^2 has length 2
  const ScalarField g = [](std::span<const double> x, std::span<double> grad) {
    if (!grad.empty()) {
      grad[0] = 1.0;
      grad[1] = 0.0;
    }
    return x[0];
  };
  const DomainBox box({-1.0, -1.0}, {1.0, 1.0});
  double prev_err = 1e9;
  // the truncation error behaves like cos(R)/R; pick R near a trough
  for (double R : {10.0, 61.0}) {
    const double val = area_deterministic(g, box, R);
    const double err = std::abs(val - 2.0);
    CHECK(err < prev_err);
    prev_err = err;
  }
  CHECK(prev_err < 0.02);
}

TEST_CASE("identity gradient covariance gives area 1/2 per unit volume") {
  const DomainBox box({0.0, 0.0}, {1.0, 1.0});
  const SphereRule rule = build_sphere_rule(2, 360);
  const MomentField f = constant_moments(2, {1.0, 0.0, 0.0, 1.0});
  CHECK(expected_area_centered(f, box, rule) == doctest::Approx(0.5).epsilon(1e-10));
}

TEST_CASE("general and centered evaluators agree for zero mean") {
  const DomainBox box({0.0, 0.0}, {2.0, 1.0});
  const SphereRule rule = build_sphere_rule(2, 360);
  const MomentField f = constant_moments(2, {2.0, 0.3, 0.3, 1.0});
  const double a = expected_area(f, box, rule);
  const double b = expected_area_centered(f, box, rule);
  CHECK(a == doctest::Approx(b).epsilon(1e-12));
}

TEST_CASE("nonzero mean damps the area by the Gaussian factor") {
  const DomainBox box({0.0, 0.0}, {1.0, 1.0});
  const SphereRule rule = build_sphere_rule(2, 180);
  const MomentField centered = constant_moments(2, {1.0, 0.0, 0.0, 1.0});
  const MomentField shifted = constant_moments(2, {1.0, 0.0, 0.0, 1.0}, 0.7);
  const double ratio = expected_area(shifted, box, rule) / expected_area(centered, box, rule);
  CHECK(ratio == doctest::Approx(std::exp(-0.5 * 0.7 * 0.7)).epsilon(1e-12));
  CHECK_THROWS(expected_area_centered(shifted, box, rule));
}

TEST_CASE("level sets scale by exp(-u^2/2) exactly") {
  const DomainBox box({0.0, 0.0}, {1.0, 1.0});
  const SphereRule rule = build_sphere_rule(2, 90);
  const MomentField f = constant_moments(2, {1.2, -0.1, -0.1, 0.8});
  const double base = expected_area_level(f, 0.0, box, rule);
  for (double u : {0.5, 1.0, 2.0}) {
    const double val = expected_area_level(f, u, box, rule);
    CHECK(val / base == doctest::Approx(std::exp(-0.5 * u * u)).epsilon(1e-14));
  }
}

TEST_CASE("gradient covariance from raw moments") {
  // E G_i' G_j' = I, sigma = 1, grad sigma = 0 -> Sigma = I
  const std::vector<double> gm = {1.0, 0.0, 0.0, 1.0};
  const std::vector<double> gs = {0.0, 0.0};
  const auto sigma = sigma_from_moments(gm, 1.0, gs);
  CHECK(sigma[0] == doctest::Approx(1.0));
  CHECK(sigma[1] == doctest::Approx(0.0));
  CHECK(sigma[3] == doctest::Approx(1.0));

  // scaling: sigma = 2 divides everything by 4
  const auto scaled = sigma_from_moments(gm, 2.0, gs);
  CHECK(scaled[0] == doctest::Approx(0.25));
  CHECK_THROWS(sigma_from_moments(gm, 0.0, gs));
}

TEST_CASE("coarea identity for a linear 1d field") {
  // g(x) = x on [-1, 1]: every level u in (-1,1) has one root; rhs = 2
  const ScalarField g = [](std::span<const double> x, std::span<double> grad) {
    if (!grad.empty()) grad[0] = 1.0;
    return x[0];
  };
  const DomainBox box({-1.0}, {1.0});
  CoareaParams params;
  params.sample_grid = GridSpec({64});
  const auto [lhs, rhs] = coarea_check(g, box, params);
  CHECK(rhs == doctest::Approx(2.0).epsilon(1e-10));
  CHECK(lhs == doctest::Approx(rhs).epsilon(0.03));
}

TEST_CASE("coarea identity for the cone") {
  const ScalarField g = [](std::span<const double> x, std::span<double> grad) {
    const double r = std::sqrt(x[0] * x[0] + x[1] * x[1]);
    if (!grad.empty()) {
      grad[0] = r > 1e-300 ? x[0] / r : 0.0;
      grad[1] = r > 1e-300 ? x[1] / r : 0.0;
    }
    return r;
  };
  const DomainBox box({-1.0, -1.0}, {1.0, 1.0});
  CoareaParams params;
  params.sample_grid = GridSpec(2, 64);
  params.sphere_resolution = 64;
  params.lines_per_direction = 64;
  params.samples_per_line = 256;
  const auto [lhs, rhs] = coarea_check(g, box, params);
  CHECK(rhs == doctest::Approx(4.0).epsilon(1e-6));
  CHECK(std::abs(lhs - rhs) / rhs < 0.02);
}
