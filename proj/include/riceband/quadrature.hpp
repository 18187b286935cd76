#pragma once

#include <functional>
#include <span>
#include <vector>

namespace riceband {

struct QuadRule {
  std::vector<double> nodes;
  std::vector<double> weights;
};

// Gauss-Legendre rule on [-1, 1] (Newton iteration on P_n, cached per n).
const QuadRule& gauss_legendre(int n);

// Gauss-Legendre rule mapped to [a, b].
QuadRule gauss_legendre(int n, double a, double b);

// Composite Gauss-Legendre on [a, b]: `panels` equal panels of `nodes_per_panel`
// nodes each. Keeps resolution uniform when many nodes are needed.
QuadRule composite_gauss_legendre(int nodes_per_panel, int panels, double a, double b);

// Splits `total_nodes` per axis into panels of at most 32 nodes.
QuadRule axis_rule(int total_nodes, double a, double b);

double integrate(const std::function<double(double)>& f, const QuadRule& rule);

// Adaptive Gauss-Legendre: 15- vs 31-node comparison with bisection.
double integrate_adaptive(const std::function<double(double)>& f, double a, double b,
                          double tol = 1e-10, int max_depth = 48);

// Deterministic pairwise summation.
double pairwise_sum(std::span<const double> values);

// Evaluates t -> integral_{-R}^{R} cos(u t) du by composite Gauss-Legendre in
// u with `nodes_per_unit` nodes per unit length. The panels are translated
// copies of each other, so the sum over panels reduces to one panel of
// trig evaluations plus a rotation recurrence.
class TruncatedCosRule {
 public:
  TruncatedCosRule(double R, int nodes_per_unit);

  double operator()(double t) const;
  double radius() const { return radius_; }

 private:
  double radius_;
  double panel_width_;
  int panels_;
  std::vector<double> offsets_;  // node positions within the first panel
  std::vector<double> weights_;
};

}  // namespace riceband
