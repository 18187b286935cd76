#include "riceband/core.hpp"

#include <charconv>
#include <cmath>
#include <numeric>

namespace riceband {

std::string format_double(double v) {
  char buf[32];
  const auto res = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, res.ptr);
}

void parallel_for(std::size_t n, Exec exec, const std::function<void(std::size_t)>& fn) {
  if (exec == Exec::Parallel) {
    // exceptions must not escape the parallel region; rethrow the first one
    std::exception_ptr error;
#pragma omp parallel for schedule(static)
    for (long long i = 0; i < static_cast<long long>(n); ++i) {
      try {
        fn(static_cast<std::size_t>(i));
      } catch (...) {
#pragma omp critical
        if (!error) error = std::current_exception();
      }
    }
    if (error) std::rethrow_exception(error);
  } else {
    for (std::size_t i = 0; i < n; ++i) fn(i);
  }
}

DomainBox::DomainBox(std::vector<double> lower, std::vector<double> upper)
    : lower_(std::move(lower)), upper_(std::move(upper)) {
  if (lower_.empty() || lower_.size() != upper_.size()) {
    throw std::invalid_argument("DomainBox: bounds must be non-empty and of equal length");
  }
  for (std::size_t i = 0; i < lower_.size(); ++i) {
    if (!(lower_[i] < upper_[i])) {
      throw std::invalid_argument("DomainBox: lower[" + std::to_string(i) + "] must be < upper");
    }
  }
}

double DomainBox::volume() const {
  double v = 1.0;
  for (int i = 0; i < dim(); ++i) v *= side(i);
  return v;
}

bool DomainBox::contains(std::span<const double> x, double tol) const {
  if (static_cast<int>(x.size()) != dim()) return false;
  for (int i = 0; i < dim(); ++i) {
    if (x[static_cast<std::size_t>(i)] < lower(i) - tol || x[static_cast<std::size_t>(i)] > upper(i) + tol) return false;
  }
  return true;
}

double box_volume(const DomainBox& box) { return box.volume(); }

GridSpec::GridSpec(std::vector<int> points_per_axis) : points_(std::move(points_per_axis)) {
  if (points_.empty()) throw std::invalid_argument("GridSpec: empty axis list");
  for (int p : points_) {
    if (p < 2) throw std::invalid_argument("GridSpec: need at least 2 points per axis");
  }
}

GridSpec::GridSpec(int dim, int points) : GridSpec(std::vector<int>(static_cast<std::size_t>(dim), points)) {}

std::size_t GridSpec::total_points() const {
  std::size_t n = 1;
  for (int p : points_) n *= static_cast<std::size_t>(p);
  return n;
}

double GridSpec::spacing(const DomainBox& box, int axis) const {
  return box.side(axis) / (points(axis) - 1);
}

std::vector<double> axis_nodes(const DomainBox& box, const GridSpec& spec, int axis) {
  const int n = spec.points(axis);
  const double h = spec.spacing(box, axis);
  std::vector<double> nodes(static_cast<std::size_t>(n));
  for (int k = 0; k < n; ++k) nodes[static_cast<std::size_t>(k)] = box.lower(axis) + h * k;
  nodes.back() = box.upper(axis);
  return nodes;
}

std::vector<double> tensor_grid(const DomainBox& box, const GridSpec& spec) {
  if (spec.dim() != box.dim()) throw std::invalid_argument("tensor_grid: dimension mismatch");
  const int d = box.dim();
  std::vector<std::vector<double>> per_axis;
  per_axis.reserve(static_cast<std::size_t>(d));
  for (int i = 0; i < d; ++i) per_axis.push_back(axis_nodes(box, spec, i));

  const std::size_t total = spec.total_points();
  std::vector<double> out(total * static_cast<std::size_t>(d));
  std::vector<int> idx(static_cast<std::size_t>(d), 0);
  for (std::size_t p = 0; p < total; ++p) {
    for (int i = 0; i < d; ++i) {
      out[p * static_cast<std::size_t>(d) + static_cast<std::size_t>(i)] =
          per_axis[static_cast<std::size_t>(i)][static_cast<std::size_t>(idx[static_cast<std::size_t>(i)])];
    }
    for (int i = d - 1; i >= 0; --i) {  // last axis fastest
      if (++idx[static_cast<std::size_t>(i)] < spec.points(i)) break;
      idx[static_cast<std::size_t>(i)] = 0;
    }
  }
  return out;
}

ScalarField with_fd_gradient(std::function<double(std::span<const double>)> value, double scale) {
  const double h = 1e-6 * scale;
  return [value = std::move(value), h](std::span<const double> x, std::span<double> grad) {
    const double v = value(x);
    if (!grad.empty()) {
      std::vector<double> xp(x.begin(), x.end());
      for (std::size_t i = 0; i < x.size(); ++i) {
        const double xi = xp[i];
        xp[i] = xi + h;
        const double fp = value(xp);
        xp[i] = xi - h;
        const double fm = value(xp);
        xp[i] = xi;
        grad[i] = (fp - fm) / (2.0 * h);
      }
    }
    return v;
  };
}

Estimate Estimate::from_samples(std::span<const double> samples) {
  Estimate e;
  e.replicates = static_cast<int>(samples.size());
  if (samples.empty()) return e;
  double mean = 0.0;
  for (double s : samples) mean += s;
  mean /= static_cast<double>(samples.size());
  e.value = mean;
  if (samples.size() > 1) {
    double ss = 0.0;
    for (double s : samples) ss += (s - mean) * (s - mean);
    const double var = ss / static_cast<double>(samples.size() - 1);
    e.stderr_value = std::sqrt(var / static_cast<double>(samples.size()));
    e.has_stderr = true;
  }
  return e;
}

}  // namespace riceband
