#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <charconv>
#include <cmath>
#include <vector>

#include "riceband/core.hpp"
#include "riceband/linalg.hpp"

using namespace riceband;

TEST_CASE("DomainBox validates bounds") {
  CHECK_THROWS(DomainBox({}, {}));
  CHECK_THROWS(DomainBox({0.0}, {0.0}));
  CHECK_THROWS(DomainBox({1.0}, {0.0}));
  CHECK_THROWS(DomainBox({0.0, 0.0}, {1.0}));
  DomainBox box({-1.0, 0.0}, {1.0, 3.0});
  CHECK(box.dim() == 2);
  CHECK(box.volume() == doctest::Approx(6.0));
  CHECK(box.side(1) == doctest::Approx(3.0));
  const double inside[] = {0.5, 2.9};
  const double outside[] = {0.5, 3.1};
  CHECK(box.contains(inside));
  CHECK(!box.contains(outside));
}

TEST_CASE("grid nodes hit both endpoints and enumerate last axis fastest") {
  DomainBox box({0.0, 0.0}, {1.0, 2.0});
  GridSpec spec(std::vector<int>{2, 3});
  CHECK(spec.total_points() == 6);

  const auto xs = axis_nodes(box, spec, 0);
  CHECK(xs.front() == 0.0);
  CHECK(xs.back() == 1.0);
  const auto ys = axis_nodes(box, spec, 1);
  CHECK(ys == std::vector<double>{0.0, 1.0, 2.0});

  const auto grid = tensor_grid(box, spec);
  const std::vector<double> expected = {0, 0, 0, 1, 0, 2, 1, 0, 1, 1, 1, 2};
  CHECK(grid == expected);
}

TEST_CASE("GridSpec rejects degenerate axes") {
  CHECK_THROWS(GridSpec({1}));
  CHECK_THROWS(GridSpec(std::vector<int>{}));
}

TEST_CASE("parallel and serial execution fill identical slots") {
  std::vector<double> a(1000), b(1000);
  auto fill = [](std::vector<double>& v) {
    return [&v](std::size_t i) { v[i] = std::sin(static_cast<double>(i)) * 1e-3; };
  };
  parallel_for(a.size(), Exec::Serial, fill(a));
  parallel_for(b.size(), Exec::Parallel, fill(b));
  CHECK(a == b);
}

TEST_CASE("finite-difference gradient wrapper") {
  auto f = [](std::span<const double> x) { return x[0] * x[0] * x[1] + 3.0 * x[1]; };
  ScalarField g = with_fd_gradient(f);
  const double x[] = {1.5, -2.0};
  double grad[2];
  const double v = g(x, grad);
  CHECK(v == doctest::Approx(1.5 * 1.5 * -2.0 + 3.0 * -2.0));
  CHECK(grad[0] == doctest::Approx(2.0 * 1.5 * -2.0).epsilon(1e-7));
  CHECK(grad[1] == doctest::Approx(1.5 * 1.5 + 3.0).epsilon(1e-7));
}

TEST_CASE("Estimate from samples") {
  const double samples[] = {1.0, 2.0, 3.0, 4.0};
  const Estimate e = Estimate::from_samples(samples);
  CHECK(e.value == doctest::Approx(2.5));
  // sample variance 5/3, stderr sqrt(5/12)
  CHECK(e.stderr_value == doctest::Approx(std::sqrt(5.0 / 12.0)));
  CHECK(e.replicates == 4);
  CHECK(e.has_stderr);

  const double one[] = {7.0};
  const Estimate s = Estimate::from_samples(one);
  CHECK(s.value == 7.0);
  CHECK(!s.has_stderr);
}

TEST_CASE("format_double round-trips exactly") {
  for (double v : {0.1, 1.0 / 3.0, 2.0 * std::acos(-1.0), -1e-300, 12345.0, 0.0}) {
    const std::string s = format_double(v);
    double back = 0.0;
    std::from_chars(s.data(), s.data() + s.size(), back);
    CHECK(back == v);
  }
  CHECK(format_double(0.1) == "0.1");
  CHECK(format_double(2.0) == "2");
}

TEST_CASE("symmetric eigensolver and PSD clamp") {
  // eigenvalues of [[2,1],[1,2]] are 1 and 3
  const std::vector<double> m = {2.0, 1.0, 1.0, 2.0};
  const auto ev = eigen_symmetric(m, 2);
  CHECK(ev[0] == doctest::Approx(1.0));
  CHECK(ev[1] == doctest::Approx(3.0));

  const std::vector<double> indef = {1.0, 2.0, 2.0, 1.0};  // eigenvalues -1, 3
  CHECK_THROWS(clamp_psd(indef, 2));
  const auto clamped = clamp_psd(indef, 2, 2.0);
  const auto cev = eigen_symmetric(clamped, 2);
  CHECK(cev[0] == doctest::Approx(0.0).epsilon(1e-12));
  CHECK(cev[1] == doctest::Approx(3.0));

  const std::vector<double> tiny = {1.0, 0.0, 0.0, -1e-12};
  const auto fixed = clamp_psd(tiny, 2);
  CHECK(fixed[3] >= 0.0);
}
