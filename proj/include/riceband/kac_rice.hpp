#pragma once

#include <functional>
#include <span>
#include <utility>
#include <vector>

#include "riceband/core.hpp"
#include "riceband/sphere.hpp"

namespace riceband {

// Local Gaussian moments of a random field: mean m(x), standard deviation
// sigma(x) > 0, and the covariance matrix Sigma(x) of grad(G/sigma) at x
// (row-major d*d, written into the provided span).
struct MomentField {
  int dim = 0;
  std::function<double(std::span<const double>)> mean;
  std::function<double(std::span<const double>)> sigma;
  std::function<void(std::span<const double>, std::span<double>)> sigma_matrix;
};

struct QuadSizes {
  int nodes_per_axis = 64;    // spatial Gauss-Legendre nodes per axis
  int u_nodes_per_unit = 32;  // oscillatory-variable nodes per unit of R
};

// Truncated oscillatory area formula for a non-random field:
//   (1/2pi) int_{-R}^{R} du int_F cos[u g(x)] ||grad g(x)|| dx
// Converges to the area of g^{-1}(0) as R grows.
double area_deterministic(const ScalarField& g, const DomainBox& box, double R,
                          const QuadSizes& quad = {}, Exec exec = Exec::Parallel);

// Expected area of the zero set of a Gaussian field:
//   (1/sqrt(2pi)) int_F exp(-m^2/(2 sigma^2)) E||grad(G/sigma)|| dx
// with the expectation in closed form through the sphere rule.
double expected_area(const MomentField& model, const DomainBox& box, const SphereRule& rule,
                     const QuadSizes& quad = {}, Exec exec = Exec::Parallel);

// Centered reduction (requires m = 0 on the quadrature nodes):
//   Gamma((d+1)/2)/(2 pi^{(d+1)/2}) int_F int_S sqrt(s^T Sigma(x) s) mu(ds) dx
double expected_area_centered(const MomentField& model, const DomainBox& box,
                              const SphereRule& rule, const QuadSizes& quad = {},
                              Exec exec = Exec::Parallel);

// Level-u set of a unit-variance field: multiplies the centered value by
// exp(-u^2/2). Requires sigma = 1 on the quadrature nodes.
double expected_area_level(const MomentField& model, double u, const DomainBox& box,
                           const SphereRule& rule, const QuadSizes& quad = {},
                           Exec exec = Exec::Parallel);

// Sigma_ij = (E G_i'G_j' - sigma_i' sigma_j') / sigma^2, symmetrized and
// eigenvalue-clamped to the PSD cone (tolerance 1e-10). Throws if sigma <= 0.
std::vector<double> sigma_from_moments(std::span<const double> grad_moment, double sigma,
                                       std::span<const double> grad_sigma);

struct CoareaParams {
  GridSpec sample_grid{2, 64};  // used to scan the range of g
  int level_nodes = 32;         // Gauss-Legendre nodes in the level variable
  int sphere_resolution = 180;  // favard settings for d >= 2 slices
  int lines_per_direction = 96;
  int samples_per_line = 512;
  int grid_1d = 4096;           // crossing-count grid for d = 1 slices
};

// Both sides of the coarea identity
//   int lambda_{d-1}[g^{-1}(u)] du = int_F ||grad g|| dx
// Returns (lhs, rhs). The u-range is the sampled range of g padded by 1%.
std::pair<double, double> coarea_check(const ScalarField& g, const DomainBox& box,
                                       const CoareaParams& params,
                                       const QuadSizes& quad = {}, Exec exec = Exec::Parallel);

}  // namespace riceband
