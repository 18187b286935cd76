#include "riceband/kac_rice.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>

#include "riceband/box_quadrature.hpp"
#include "riceband/linalg.hpp"
#include "riceband/quadrature.hpp"
#include "riceband/zero_set.hpp"

namespace riceband {

BoxRule box_rule(const DomainBox& box, int nodes_per_axis) {
  BoxRule rule;
  rule.dim = box.dim();
  std::vector<QuadRule> per_axis;
  for (int i = 0; i < box.dim(); ++i) {
    per_axis.push_back(axis_rule(nodes_per_axis, box.lower(i), box.upper(i)));
  }
  std::size_t total = 1;
  for (const auto& r : per_axis) total *= r.nodes.size();
  rule.nodes.resize(total * static_cast<std::size_t>(box.dim()));
  rule.weights.assign(total, 1.0);
  std::vector<std::size_t> idx(static_cast<std::size_t>(box.dim()), 0);
  for (std::size_t p = 0; p < total; ++p) {
    for (int i = 0; i < box.dim(); ++i) {
      rule.nodes[p * static_cast<std::size_t>(box.dim()) + static_cast<std::size_t>(i)] =
          per_axis[static_cast<std::size_t>(i)].nodes[idx[static_cast<std::size_t>(i)]];
      rule.weights[p] *= per_axis[static_cast<std::size_t>(i)].weights[idx[static_cast<std::size_t>(i)]];
    }
    for (int i = box.dim() - 1; i >= 0; --i) {
      if (++idx[static_cast<std::size_t>(i)] < per_axis[static_cast<std::size_t>(i)].nodes.size()) break;
      idx[static_cast<std::size_t>(i)] = 0;
    }
  }
  return rule;
}

double area_deterministic(const ScalarField& g, const DomainBox& box, double R,
                          const QuadSizes& quad, Exec exec) {
  if (!(R > 0.0)) throw std::invalid_argument("area_deterministic: need R > 0");
  const BoxRule rule = box_rule(box, quad.nodes_per_axis);
  const TruncatedCosRule cos_rule(R, quad.u_nodes_per_unit);
  const int d = box.dim();

  std::vector<double> terms(rule.size());
  parallel_for(rule.size(), exec, [&](std::size_t p) {
    std::vector<double> grad(static_cast<std::size_t>(d));
    const double v = g(rule.node(p), grad);
    terms[p] = rule.weights[p] * norm(grad) * cos_rule(v);
  });
  return pairwise_sum(terms) / (2.0 * std::numbers::pi);
}

double expected_area(const MomentField& model, const DomainBox& box, const SphereRule& rule,
                     const QuadSizes& quad, Exec exec) {
  if (model.dim != box.dim() || rule.dim != box.dim()) {
    throw std::invalid_argument("expected_area: dimension mismatch");
  }
  const int d = box.dim();
  const BoxRule xrule = box_rule(box, quad.nodes_per_axis);
  const double c_norm = std::tgamma(0.5 * (d + 1)) /
                        (std::sqrt(2.0) * std::pow(std::numbers::pi, 0.5 * d));

  std::vector<double> terms(xrule.size());
  parallel_for(xrule.size(), exec, [&](std::size_t p) {
    const std::span<const double> x = xrule.node(p);
    const double sig = model.sigma(x);
    if (!(sig > 0.0)) throw std::invalid_argument("expected_area: sigma(x) <= 0");
    const double m = model.mean(x);
    std::vector<double> sigma_mat(static_cast<std::size_t>(d) * static_cast<std::size_t>(d));
    model.sigma_matrix(x, sigma_mat);
    double sphere_int = 0.0;
    for (std::size_t si = 0; si < rule.size(); ++si) {
      sphere_int += rule.weights[si] * std::sqrt(std::max(0.0, quadratic_form(sigma_mat, rule.node(si))));
    }
    const double grad_norm_mean = c_norm * sphere_int;
    terms[p] = xrule.weights[p] * std::exp(-0.5 * m * m / (sig * sig)) * grad_norm_mean;
  });
  return pairwise_sum(terms) / std::sqrt(2.0 * std::numbers::pi);
}

double expected_area_centered(const MomentField& model, const DomainBox& box,
                              const SphereRule& rule, const QuadSizes& quad, Exec exec) {
  if (model.dim != box.dim() || rule.dim != box.dim()) {
    throw std::invalid_argument("expected_area_centered: dimension mismatch");
  }
  const int d = box.dim();
  const BoxRule xrule = box_rule(box, quad.nodes_per_axis);

  std::vector<double> terms(xrule.size());
  parallel_for(xrule.size(), exec, [&](std::size_t p) {
    const std::span<const double> x = xrule.node(p);
    if (std::abs(model.mean(x)) > 0.0) {
      throw std::invalid_argument("expected_area_centered: nonzero mean supplied");
    }
    std::vector<double> sigma_mat(static_cast<std::size_t>(d) * static_cast<std::size_t>(d));
    model.sigma_matrix(x, sigma_mat);
    double sphere_int = 0.0;
    for (std::size_t si = 0; si < rule.size(); ++si) {
      sphere_int += rule.weights[si] * std::sqrt(std::max(0.0, quadratic_form(sigma_mat, rule.node(si))));
    }
    terms[p] = xrule.weights[p] * sphere_int;
  });
  const double c = std::tgamma(0.5 * (d + 1)) / (2.0 * std::pow(std::numbers::pi, 0.5 * (d + 1)));
  return c * pairwise_sum(terms);
}

double expected_area_level(const MomentField& model, double u, const DomainBox& box,
                           const SphereRule& rule, const QuadSizes& quad, Exec exec) {
  // sanity-check sigma = 1 on a few probe points
  const BoxRule probe = box_rule(box, 3);
  for (std::size_t p = 0; p < probe.size(); ++p) {
    if (std::abs(model.sigma(probe.node(p)) - 1.0) > 1e-12) {
      throw std::invalid_argument("expected_area_level: requires sigma = 1");
    }
  }
  MomentField centered = model;
  centered.mean = [](std::span<const double>) { return 0.0; };
  return std::exp(-0.5 * u * u) * expected_area_centered(centered, box, rule, quad, exec);
}

std::vector<double> sigma_from_moments(std::span<const double> grad_moment, double sigma,
                                       std::span<const double> grad_sigma) {
  if (!(sigma > 0.0)) throw std::invalid_argument("sigma_from_moments: need sigma > 0");
  const int d = static_cast<int>(grad_sigma.size());
  if (grad_moment.size() != static_cast<std::size_t>(d) * static_cast<std::size_t>(d)) {
    throw std::invalid_argument("sigma_from_moments: moment matrix must be d*d");
  }
  std::vector<double> out(grad_moment.size());
  for (int i = 0; i < d; ++i) {
    for (int j = 0; j < d; ++j) {
      const double mij = 0.5 * (grad_moment[static_cast<std::size_t>(i * d + j)] +
                                grad_moment[static_cast<std::size_t>(j * d + i)]);
      out[static_cast<std::size_t>(i * d + j)] =
          (mij - grad_sigma[static_cast<std::size_t>(i)] * grad_sigma[static_cast<std::size_t>(j)]) /
          (sigma * sigma);
    }
  }
  return clamp_psd(out, d, 1e-10);
}

std::pair<double, double> coarea_check(const ScalarField& g, const DomainBox& box,
                                       const CoareaParams& params, const QuadSizes& quad,
                                       Exec exec) {
  const int d = box.dim();

  // rhs: tensor quadrature of ||grad g||
  const BoxRule xrule = box_rule(box, quad.nodes_per_axis);
  std::vector<double> rhs_terms(xrule.size());
  parallel_for(xrule.size(), exec, [&](std::size_t p) {
    std::vector<double> grad(static_cast<std::size_t>(d));
    (void)g(xrule.node(p), grad);
    rhs_terms[p] = xrule.weights[p] * norm(grad);
  });
  const double rhs = pairwise_sum(rhs_terms);

  // observed range of g, padded by 1%
  const std::vector<double> grid = tensor_grid(box, params.sample_grid);
  double gmin = std::numeric_limits<double>::infinity();
  double gmax = -gmin;
  for (std::size_t p = 0; p < params.sample_grid.total_points(); ++p) {
    const double v = g({grid.data() + p * static_cast<std::size_t>(d), static_cast<std::size_t>(d)}, {});
    gmin = std::min(gmin, v);
    gmax = std::max(gmax, v);
  }
  const double pad = 0.01 * (gmax - gmin);
  const QuadRule level_rule = gauss_legendre(params.level_nodes, gmin - pad, gmax + pad);

  const SphereRule sphere =
      d >= 2 ? build_sphere_rule(d, params.sphere_resolution) : SphereRule{};

  double lhs = 0.0;
  for (std::size_t li = 0; li < level_rule.nodes.size(); ++li) {
    const double u = level_rule.nodes[li];
    ScalarField shifted = [&g, u](std::span<const double> x, std::span<double> grad) {
      return g(x, grad) - u;
    };
    double level_area = 0.0;
    if (d == 1) {
      const GridSpec spec(1, params.grid_1d);
      const std::vector<double> nodes = axis_nodes(box, spec, 0);
      std::vector<double> vals(nodes.size());
      for (std::size_t i = 0; i < nodes.size(); ++i) {
        vals[i] = shifted(std::span<const double>(&nodes[i], 1), {});
      }
      level_area = count_zeros_1d(nodes, vals);
    } else {
      level_area = favard_area(shifted, box, sphere, params.lines_per_direction,
                               params.samples_per_line, exec);
    }
    lhs += level_rule.weights[li] * level_area;
  }
  return {lhs, rhs};
}

}  // namespace riceband
