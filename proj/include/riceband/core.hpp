#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace riceband {

// Execution policy for the data-parallel kernels. Serial and Parallel
// produce bit-identical results: parallel loops only fill independent
// array slots and all reductions run in a fixed order afterwards.
enum class Exec { Serial, Parallel };

// Runs fn(i) for i in [0, n). Parallelizes with OpenMP when asked.
void parallel_for(std::size_t n, Exec exec, const std::function<void(std::size_t)>& fn);

// Axis-aligned compact integration domain.
class DomainBox {
 public:
  DomainBox(std::vector<double> lower, std::vector<double> upper);

  int dim() const { return static_cast<int>(lower_.size()); }
  double lower(int i) const { return lower_[static_cast<std::size_t>(i)]; }
  double upper(int i) const { return upper_[static_cast<std::size_t>(i)]; }
  double side(int i) const { return upper_[static_cast<std::size_t>(i)] - lower_[static_cast<std::size_t>(i)]; }
  double volume() const;
  bool contains(std::span<const double> x, double tol = 0.0) const;

  const std::vector<double>& lower_bounds() const { return lower_; }
  const std::vector<double>& upper_bounds() const { return upper_; }

 private:
  std::vector<double> lower_, upper_;
};

double box_volume(const DomainBox& box);

// Uniform tensor-product discretization of a DomainBox.
class GridSpec {
 public:
  explicit GridSpec(std::vector<int> points_per_axis);
  GridSpec(int dim, int points);

  int dim() const { return static_cast<int>(points_.size()); }
  int points(int axis) const { return points_[static_cast<std::size_t>(axis)]; }
  const std::vector<int>& points_per_axis() const { return points_; }
  std::size_t total_points() const;
  double spacing(const DomainBox& box, int axis) const;

 private:
  std::vector<int> points_;
};

// Per-axis node coordinates, both endpoints included.
std::vector<double> axis_nodes(const DomainBox& box, const GridSpec& spec, int axis);

// Row-major (last axis fastest) enumeration of the Cartesian product of the
// per-axis nodes. Returns total_points()*dim coordinates, flattened.
std::vector<double> tensor_grid(const DomainBox& box, const GridSpec& spec);

// Scalar field evaluation contract: returns the value at x and, when `grad`
// is non-empty, writes the d gradient components into it.
using ScalarField = std::function<double(std::span<const double> x, std::span<double> grad)>;

// Wraps a value-only function with a central-difference gradient
// (step 1e-6 * scale).
ScalarField with_fd_gradient(std::function<double(std::span<const double>)> value, double scale = 1.0);

// Shortest decimal string that round-trips to the same double.
std::string format_double(double v);

// A Monte-Carlo (or otherwise sampled) value with its standard error.
struct Estimate {
  double value = 0.0;
  double stderr_value = 0.0;
  int replicates = 0;
  bool has_stderr = false;  // false for a single replicate

  static Estimate from_samples(std::span<const double> samples);
};

}  // namespace riceband
