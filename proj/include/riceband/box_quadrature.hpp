#pragma once

#include <span>
#include <vector>

#include "riceband/core.hpp"
#include "riceband/quadrature.hpp"

namespace riceband {

// Tensor Gauss-Legendre rule over a box: flattened nodes and combined
// weights, panels of at most 32 nodes per axis.
struct BoxRule {
  int dim = 0;
  std::vector<double> nodes;  // size() * dim
  std::vector<double> weights;

  std::size_t size() const { return weights.size(); }
  std::span<const double> node(std::size_t i) const {
    return {nodes.data() + i * static_cast<std::size_t>(dim), static_cast<std::size_t>(dim)};
  }
};

BoxRule box_rule(const DomainBox& box, int nodes_per_axis);

}  // namespace riceband
