#pragma once

#include <iosfwd>
#include <span>
#include <vector>

#include "riceband/core.hpp"
#include "riceband/sphere.hpp"

namespace riceband {

// Piecewise-linear discretization of a zero set: isolated points for d = 1,
// segments for d = 2, triangles for d = 3.
struct ZeroSetMesh {
  int dim = 0;
  std::vector<double> vertices;  // n_vertices * dim
  std::vector<int> cells;        // n_cells * cell_size

  int cell_size() const { return dim <= 1 ? 1 : dim; }
  std::size_t n_vertices() const { return dim == 0 ? 0 : vertices.size() / static_cast<std::size_t>(dim); }
  std::size_t n_cells() const {
    return cells.empty() ? 0 : cells.size() / static_cast<std::size_t>(cell_size());
  }
};

// Counts zeros of sampled 1-d data: sign changes between consecutive nonzero
// samples, 1 per maximal interior run of exact zeros, 1/2 per run touching an
// endpoint. Throws on unsorted abscissas.
double count_zeros_1d(std::span<const double> t, std::span<const double> values);

// Truncated Kac counting integral
//   (1/2pi) int_{-R}^{R} du int_a^b cos[u f(t)] |f'(t)| dt
// with Gauss-Legendre in both variables; `u_nodes_per_unit` nodes per unit of
// R, at least `t_nodes` nodes on [a, b] (scaled up with R to track the
// oscillation). Converges to the zero count with O(1/R) error.
double kac_counting_integral(const ScalarField& f, double a, double b, double R,
                             int u_nodes_per_unit = 32, int t_nodes = 256);

// Linear-interpolation zero-set extraction on a tensor grid: sign changes for
// d = 1, marching squares (with asymptotic decider on ambiguous cells) for
// d = 2, marching cubes for d = 3. `values` is in tensor_grid order.
ZeroSetMesh extract_zero_set(std::span<const double> values, const DomainBox& box,
                             const GridSpec& spec);

// d=1: point count; d=2: total segment length; d=3: total triangle area.
double mesh_area(const ZeroSetMesh& mesh);

// Plain-text format: header "dim n_vertices n_cells", vertex lines, cell lines.
void write_mesh(std::ostream& os, const ZeroSetMesh& mesh);
ZeroSetMesh read_mesh(std::istream& is);

// Family of parallel lines with direction s, one per point of a uniform grid
// on the projection of the box onto s^perp.
struct LineFamily {
  std::vector<double> direction;    // unit vector, length d
  std::vector<double> base_points;  // n_lines * d, each orthogonal to direction
  double cell_measure = 0.0;        // (d-1)-volume represented by one line

  std::size_t n_lines(int dim) const { return base_points.size() / static_cast<std::size_t>(dim); }
};

LineFamily build_line_family(const DomainBox& box, std::span<const double> direction,
                             int lines_per_axis);

// Clips the line {base + t*dir} to the box. Returns false when disjoint.
bool clip_line_to_box(const DomainBox& box, std::span<const double> base,
                      std::span<const double> dir, double& t0, double& t1);

// Favard (integral-geometric) area of g^{-1}(0):
//   Gamma((d+1)/2) / (2 pi^{(d-1)/2}) * int_{S^{d-1}} int_{s^perp} lambda_0[line cap g^{-1}(0)] dy mu(ds)
// with a deterministic line grid per direction and zero crossings counted by
// count_zeros_1d along each clipped line.
double favard_area(const ScalarField& g, const DomainBox& box, const SphereRule& rule,
                   int lines_per_direction, int samples_per_line,
                   Exec exec = Exec::Parallel);

}  // namespace riceband
