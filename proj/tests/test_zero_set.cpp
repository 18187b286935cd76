#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <numbers>
#include <sstream>
#include <vector>

#include "riceband/zero_set.hpp"

using namespace riceband;

namespace {

std::vector<double> iota_abscissa(std::size_t n) {
  std::vector<double> t(n);
  for (std::size_t i = 0; i < n; ++i) t[i] = static_cast<double>(i);
  return t;
}

double count(std::initializer_list<double> values) {
  std::vector<double> v(values);
  return count_zeros_1d(iota_abscissa(v.size()), v);
}

ScalarField circle_field() {
  return [](std::span<const double> x, std::span<double> grad) {
    if (!grad.empty()) {
      grad[0] = 2.0 * x[0];
      grad[1] = 2.0 * x[1];
    }
    return x[0] * x[0] + x[1] * x[1] - 1.0;
  };
}

}  // namespace

TEST_CASE("crossing counts of sampled data") {
  CHECK(count({1.0, -1.0, 1.0}) == 2.0);
  CHECK(count({0.0, 1.0, 2.0}) == 0.5);
  CHECK(count({1.0, 1.0, 1.0}) == 0.0);
  CHECK(count({1.0, 0.0, -1.0}) == 1.0);
  CHECK(count({1.0, 0.0, 0.0, 1.0}) == 1.0);   // one interior zero run
  CHECK(count({-1.0, 0.0, 0.0, 1.0}) == 1.0);  // run absorbs the sign change
  CHECK(count({1.0, 2.0, 0.0}) == 0.5);
  CHECK_THROWS(count({1.0}));
}

TEST_CASE("truncated counting integral converges in R") {
  // f(t) = t^2 - 1 has two zeros in (-2, 2)
  const ScalarField f = [](std::span<const double> x, std::span<double> grad) {
    if (!grad.empty()) grad[0] = 2.0 * x[0];
    return x[0] * x[0] - 1.0;
  };
  double prev_err = 1e9;
  for (double R : {10.0, 40.0, 160.0}) {
    const double val = kac_counting_integral(f, -2.0, 2.0, R);
    const double err = std::abs(val - 2.0);
    CHECK(err < prev_err);
    prev_err = err;
  }
  CHECK(prev_err < 0.01);
}

TEST_CASE("1d extraction places interpolated zeros") {
  const std::vector<double> values = {1.0, -1.0, -1.0, 3.0};
  const DomainBox box({0.0}, {3.0});
  const ZeroSetMesh mesh = extract_zero_set(values, box, GridSpec({4}));
  REQUIRE(mesh.n_vertices() == 2);
  CHECK(mesh.vertices[0] == doctest::Approx(0.5));
  CHECK(mesh.vertices[1] == doctest::Approx(2.25));
  CHECK(mesh_area(mesh) == doctest::Approx(2.0));
}

TEST_CASE("marching squares recovers the unit circle length") {
  const DomainBox box({-2.0, -2.0}, {2.0, 2.0});
  const GridSpec spec(2, 257);
  const auto grid = tensor_grid(box, spec);
  std::vector<double> values(spec.total_points());
  const ScalarField g = circle_field();
  for (std::size_t p = 0; p < values.size(); ++p) {
    values[p] = g(std::span<const double>(grid.data() + 2 * p, 2), {});
  }
  const ZeroSetMesh mesh = extract_zero_set(values, box, spec);
  CHECK(mesh_area(mesh) == doctest::Approx(2.0 * std::numbers::pi).epsilon(0.01));
}

TEST_CASE("marching cubes recovers the unit sphere area") {
  const DomainBox box({-1.5, -1.5, -1.5}, {1.5, 1.5, 1.5});
  const GridSpec spec(3, 65);
  const auto grid = tensor_grid(box, spec);
  std::vector<double> values(spec.total_points());
  for (std::size_t p = 0; p < values.size(); ++p) {
    const double* x = grid.data() + 3 * p;
    values[p] = x[0] * x[0] + x[1] * x[1] + x[2] * x[2] - 1.0;
  }
  const ZeroSetMesh mesh = extract_zero_set(values, box, spec);
  CHECK(mesh_area(mesh) == doctest::Approx(4.0 * std::numbers::pi).epsilon(0.03));
}

TEST_CASE("mesh text format round-trips") {
  ZeroSetMesh mesh;
  mesh.dim = 2;
  mesh.vertices = {0.1, 0.2, 1.0 / 3.0, -4.5e-7};
  mesh.cells = {0, 1};
  std::stringstream ss;
  write_mesh(ss, mesh);
  const ZeroSetMesh back = read_mesh(ss);
  CHECK(back.dim == mesh.dim);
  CHECK(back.vertices == mesh.vertices);
  CHECK(back.cells == mesh.cells);
}

TEST_CASE("line families cover the box") {
  const DomainBox box({-2.0, -2.0}, {2.0, 2.0});
  const std::vector<double> dir = {1.0, 0.0};
  const LineFamily fam = build_line_family(box, dir, 16);
  CHECK(fam.n_lines(2) == 16);
  for (std::size_t l = 0; l < fam.n_lines(2); ++l) {
    // base points orthogonal to the direction
    const double ip = fam.base_points[2 * l] * dir[0] + fam.base_points[2 * l + 1] * dir[1];
    CHECK(ip == doctest::Approx(0.0).epsilon(1e-12));
  }
  double t0 = 0.0, t1 = 0.0;
  const std::vector<double> base = {0.0, 0.5};
  CHECK(clip_line_to_box(box, base, dir, t0, t1));
  CHECK(t0 == doctest::Approx(-2.0));
  CHECK(t1 == doctest::Approx(2.0));

  const std::vector<double> outside = {0.0, 5.0};
  CHECK(!clip_line_to_box(box, outside, dir, t0, t1));
}

TEST_CASE("integral-geometric area of test shapes") {
  const SphereRule rule2 = build_sphere_rule(2, 64);
  const DomainBox box2({-2.0, -2.0}, {2.0, 2.0});
  const double circle = favard_area(circle_field(), box2, rule2, 256, 512);
  CHECK(circle == doctest::Approx(2.0 * std::numbers::pi).epsilon(0.01));

  // plane slice x1 = 0 in a 2d box: a segment of length 4
  const ScalarField plane = [](std::span<const double> x, std::span<double> grad) {
    if (!grad.empty()) {
      grad[0] = 0.0;
      grad[1] = 1.0;
    }
    return x[1];
  };
  const double slice = favard_area(plane, box2, rule2, 256, 512);
  CHECK(slice == doctest::Approx(4.0).epsilon(0.01));
}

TEST_CASE("area is invariant under negating the field") {
  const SphereRule rule2 = build_sphere_rule(2, 32);
  const DomainBox box2({-2.0, -2.0}, {2.0, 2.0});
  const ScalarField g = circle_field();
  const ScalarField neg = [g](std::span<const double> x, std::span<double> grad) {
    const double v = g(x, grad);
    for (double& gi : grad) gi = -gi;
    return -v;
  };
  const double a = favard_area(g, box2, rule2, 128, 256);
  const double b = favard_area(neg, box2, rule2, 128, 256);
  CHECK(a == doctest::Approx(b).epsilon(1e-12));
}
