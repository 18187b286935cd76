#include "riceband/quadrature.hpp"

#include <cmath>
#include <map>
#include <mutex>
#include <numbers>
#include <stdexcept>

namespace riceband {

namespace {

QuadRule compute_gauss_legendre(int n) {
  // Newton iteration on P_n with the three-term recurrence.
  QuadRule rule;
  rule.nodes.resize(static_cast<std::size_t>(n));
  rule.weights.resize(static_cast<std::size_t>(n));
  const int m = (n + 1) / 2;
  for (int i = 0; i < m; ++i) {
    double x = std::cos(std::numbers::pi * (i + 0.75) / (n + 0.5));
    double pp = 0.0;
    for (int iter = 0; iter < 100; ++iter) {
      double p0 = 1.0, p1 = 0.0;
      for (int j = 0; j < n; ++j) {
        const double p2 = p1;
        p1 = p0;
        p0 = ((2.0 * j + 1.0) * x * p1 - j * p2) / (j + 1.0);
      }
      pp = n * (x * p0 - p1) / (x * x - 1.0);
      const double dx = p0 / pp;
      x -= dx;
      if (std::abs(dx) < 1e-15) break;
    }
    rule.nodes[static_cast<std::size_t>(i)] = -x;
    rule.nodes[static_cast<std::size_t>(n - 1 - i)] = x;
    const double w = 2.0 / ((1.0 - x * x) * pp * pp);
    rule.weights[static_cast<std::size_t>(i)] = w;
    rule.weights[static_cast<std::size_t>(n - 1 - i)] = w;
  }
  return rule;
}

}  // namespace

const QuadRule& gauss_legendre(int n) {
  if (n < 1) throw std::invalid_argument("gauss_legendre: need n >= 1");
  static std::map<int, QuadRule> cache;
  static std::mutex mutex;
  std::lock_guard<std::mutex> lock(mutex);
  auto it = cache.find(n);
  if (it == cache.end()) it = cache.emplace(n, compute_gauss_legendre(n)).first;
  return it->second;
}

QuadRule gauss_legendre(int n, double a, double b) {
  const QuadRule& base = gauss_legendre(n);
  QuadRule rule;
  rule.nodes.resize(base.nodes.size());
  rule.weights.resize(base.weights.size());
  const double mid = 0.5 * (a + b), half = 0.5 * (b - a);
  for (std::size_t i = 0; i < base.nodes.size(); ++i) {
    rule.nodes[i] = mid + half * base.nodes[i];
    rule.weights[i] = half * base.weights[i];
  }
  return rule;
}

QuadRule composite_gauss_legendre(int nodes_per_panel, int panels, double a, double b) {
  QuadRule rule;
  const double w = (b - a) / panels;
  for (int p = 0; p < panels; ++p) {
    QuadRule panel = gauss_legendre(nodes_per_panel, a + p * w, a + (p + 1) * w);
    rule.nodes.insert(rule.nodes.end(), panel.nodes.begin(), panel.nodes.end());
    rule.weights.insert(rule.weights.end(), panel.weights.begin(), panel.weights.end());
  }
  return rule;
}

QuadRule axis_rule(int total_nodes, double a, double b) {
  const int panels = (total_nodes + 31) / 32;
  const int per_panel = (total_nodes + panels - 1) / panels;
  return composite_gauss_legendre(per_panel, panels, a, b);
}

double integrate(const std::function<double(double)>& f, const QuadRule& rule) {
  double sum = 0.0;
  for (std::size_t i = 0; i < rule.nodes.size(); ++i) sum += rule.weights[i] * f(rule.nodes[i]);
  return sum;
}

namespace {

double adaptive_step(const std::function<double(double)>& f, double a, double b, double tol,
                     int depth, int max_depth) {
  const double coarse = integrate(f, gauss_legendre(15, a, b));
  const double fine = integrate(f, gauss_legendre(31, a, b));
  // the relative floor keeps roundoff from forcing endless splits
  const double accept = std::max(tol, 1e-14 * std::abs(fine));
  if (std::abs(fine - coarse) <= accept || depth >= max_depth) return fine;
  const double mid = 0.5 * (a + b);
  return adaptive_step(f, a, mid, 0.5 * tol, depth + 1, max_depth) +
         adaptive_step(f, mid, b, 0.5 * tol, depth + 1, max_depth);
}

}  // namespace

double integrate_adaptive(const std::function<double(double)>& f, double a, double b, double tol,
                          int max_depth) {
  if (!(a < b)) throw std::invalid_argument("integrate_adaptive: need a < b");
  return adaptive_step(f, a, b, tol, 0, max_depth);
}

double pairwise_sum(std::span<const double> values) {
  if (values.empty()) return 0.0;
  if (values.size() <= 8) {
    double s = 0.0;
    for (double v : values) s += v;
    return s;
  }
  const std::size_t half = values.size() / 2;
  return pairwise_sum(values.first(half)) + pairwise_sum(values.subspan(half));
}

TruncatedCosRule::TruncatedCosRule(double R, int nodes_per_unit) : radius_(R) {
  if (!(R > 0.0) || nodes_per_unit < 1) {
    throw std::invalid_argument("TruncatedCosRule: need R > 0 and nodes_per_unit >= 1");
  }
  panels_ = std::max(1, static_cast<int>(std::ceil(R)));
  panel_width_ = R / panels_;
  const int nodes = std::max(4, static_cast<int>(std::lround(nodes_per_unit * panel_width_)));
  const QuadRule panel = gauss_legendre(nodes, 0.0, panel_width_);
  offsets_ = panel.nodes;
  weights_ = panel.weights;
}

double TruncatedCosRule::operator()(double t) const {
  // One panel of trig evaluations; the remaining panels are translates,
  // handled by rotating (cos, sin) through the panel-width angle.
  double a = 0.0, b = 0.0;
  for (std::size_t j = 0; j < offsets_.size(); ++j) {
    a += weights_[j] * std::cos(offsets_[j] * t);
    b += weights_[j] * std::sin(offsets_[j] * t);
  }
  const double step = panel_width_ * t;
  const double cs = std::cos(step), sn = std::sin(step);
  double c = 1.0, s = 0.0;  // cos/sin of p * panel_width * t
  double sum = 0.0;
  for (int p = 0; p < panels_; ++p) {
    sum += c * a - s * b;
    const double cn = c * cs - s * sn;
    s = s * cs + c * sn;
    c = cn;
  }
  return 2.0 * sum;  // even integrand: double the [0, R] half
}

}  // namespace riceband
