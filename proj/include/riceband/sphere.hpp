#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <vector>

#include "riceband/core.hpp"

namespace riceband {

// Quadrature nodes and weights for the measure mu_{d-1} on the unit sphere
// S^{d-1}. For d = 1 the sphere is the two-point set {-1, +1} with counting
// measure, which makes every closed form below collapse to its d = 1 version
// without special-casing.
struct SphereRule {
  int dim = 0;
  std::vector<double> nodes;    // size() * dim, flattened
  std::vector<double> weights;  // positive, summing to omega_{d-1}
  double tol = 1e-12;           // accuracy the rule claims for smooth integrands

  std::size_t size() const { return weights.size(); }
  std::span<const double> node(std::size_t i) const {
    return {nodes.data() + i * static_cast<std::size_t>(dim), static_cast<std::size_t>(dim)};
  }
};

// Surface area omega_{d-1} = 2 pi^{d/2} / Gamma(d/2) of S^{d-1}.
double sphere_area(int d);

// d=1: two signed points. d=2: uniform angular grid. d=3: Gauss-Legendre in
// cos(theta) times a uniform grid in phi. d>=4: seeded Monte-Carlo nodes from
// the uniform sphere distribution.
SphereRule build_sphere_rule(int d, int resolution, std::optional<std::uint64_t> seed = std::nullopt);

double integrate_sphere(const SphereRule& rule,
                        const std::function<double(std::span<const double>)>& f);

// Exact value of integral_{S^{d-1}} |<x, s>| mu(ds) = 2 pi^{(d-1)/2} / Gamma((d+1)/2) * ||x||.
double abs_inner_integral_exact(std::span<const double> x);

// E ||xi|| for xi ~ N(0, Sigma), via the sphere rule:
// Gamma((d+1)/2) / (sqrt(2) pi^{d/2}) * integral sqrt(s^T Sigma s) mu(ds).
// Throws if Sigma has an eigenvalue below -1e-10; smaller negative values
// are clamped to zero inside the square root.
double expected_norm_gaussian(std::span<const double> sigma, const SphereRule& rule);

}  // namespace riceband
