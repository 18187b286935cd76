#include "riceband/sphere.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

#include "riceband/linalg.hpp"
#include "riceband/quadrature.hpp"
#include "riceband/rng.hpp"

namespace riceband {

double sphere_area(int d) {
  return 2.0 * std::pow(std::numbers::pi, 0.5 * d) / std::tgamma(0.5 * d);
}

SphereRule build_sphere_rule(int d, int resolution, std::optional<std::uint64_t> seed) {
  if (d < 1) throw std::invalid_argument("build_sphere_rule: need d >= 1");
  if (resolution < 1) throw std::invalid_argument("build_sphere_rule: need resolution >= 1");

  SphereRule rule;
  rule.dim = d;

  if (d == 1) {
    // S^0 with counting measure
    rule.nodes = {-1.0, 1.0};
    rule.weights = {1.0, 1.0};
    rule.tol = 1e-15;
    return rule;
  }

  if (d == 2) {
    const double w = 2.0 * std::numbers::pi / resolution;
    for (int k = 0; k < resolution; ++k) {
      const double phi = w * k;
      rule.nodes.push_back(std::cos(phi));
      rule.nodes.push_back(std::sin(phi));
      rule.weights.push_back(w);
    }
    rule.tol = std::max(1e-12, 10.0 / std::pow(static_cast<double>(resolution), 2.0));
    return rule;
  }

  if (d == 3) {
    // Gauss-Legendre in cos(theta), uniform in phi
    const int n_theta = resolution;
    const int n_phi = 2 * resolution;
    const QuadRule gl = gauss_legendre(n_theta, -1.0, 1.0);
    const double wphi = 2.0 * std::numbers::pi / n_phi;
    for (int i = 0; i < n_theta; ++i) {
      const double ct = gl.nodes[static_cast<std::size_t>(i)];
      const double st = std::sqrt(std::max(0.0, 1.0 - ct * ct));
      for (int k = 0; k < n_phi; ++k) {
        const double phi = wphi * (k + 0.5);
        rule.nodes.push_back(st * std::cos(phi));
        rule.nodes.push_back(st * std::sin(phi));
        rule.nodes.push_back(ct);
        rule.weights.push_back(gl.weights[static_cast<std::size_t>(i)] * wphi);
      }
    }
    rule.tol = std::max(1e-12, 10.0 / std::pow(static_cast<double>(resolution), 2.0));
    return rule;
  }

  // d >= 4: Monte-Carlo nodes (normalized Gaussians), statistical tolerance
  GaussianStream stream(seed.value_or(0x5eed5eedull));
  const double area = sphere_area(d);
  std::vector<double> v(static_cast<std::size_t>(d));
  for (int k = 0; k < resolution; ++k) {
    double nrm = 0.0;
    do {
      for (int i = 0; i < d; ++i) v[static_cast<std::size_t>(i)] = stream.normal();
      nrm = norm(v);
    } while (nrm < 1e-12);
    for (int i = 0; i < d; ++i) rule.nodes.push_back(v[static_cast<std::size_t>(i)] / nrm);
    rule.weights.push_back(area / resolution);
  }
  rule.tol = 3.0 * area / std::sqrt(static_cast<double>(resolution));
  return rule;
}

double integrate_sphere(const SphereRule& rule,
                        const std::function<double(std::span<const double>)>& f) {
  std::vector<double> terms(rule.size());
  for (std::size_t i = 0; i < rule.size(); ++i) terms[i] = rule.weights[i] * f(rule.node(i));
  return pairwise_sum(terms);
}

double abs_inner_integral_exact(std::span<const double> x) {
  const int d = static_cast<int>(x.size());
  const double r = norm(x);
  if (r == 0.0) return 0.0;
  return 2.0 * std::pow(std::numbers::pi, 0.5 * (d - 1)) / std::tgamma(0.5 * (d + 1)) * r;
}

double expected_norm_gaussian(std::span<const double> sigma, const SphereRule& rule) {
  const int d = rule.dim;
  if (sigma.size() != static_cast<std::size_t>(d) * static_cast<std::size_t>(d)) {
    throw std::invalid_argument("expected_norm_gaussian: Sigma must be d*d");
  }
  for (int i = 0; i < d; ++i) {
    for (int j = i + 1; j < d; ++j) {
      if (std::abs(sigma[static_cast<std::size_t>(i * d + j)] - sigma[static_cast<std::size_t>(j * d + i)]) > 1e-9) {
        throw std::invalid_argument("expected_norm_gaussian: Sigma must be symmetric");
      }
    }
  }
  const std::vector<double> evals = eigen_symmetric(sigma, d);
  if (evals.front() < -1e-10) {
    throw std::invalid_argument("expected_norm_gaussian: Sigma is not positive semi-definite");
  }
  const double c = std::tgamma(0.5 * (d + 1)) /
                   (std::sqrt(2.0) * std::pow(std::numbers::pi, 0.5 * d));
  const double integral = integrate_sphere(rule, [&](std::span<const double> s) {
    return std::sqrt(std::max(0.0, quadratic_form(sigma, s)));
  });
  return c * integral;
}

}  // namespace riceband
