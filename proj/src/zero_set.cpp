#include "riceband/zero_set.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <istream>
#include <limits>
#include <numbers>
#include <ostream>
#include <stdexcept>

#include "riceband/linalg.hpp"
#include "riceband/mc_tables.hpp"
#include "riceband/quadrature.hpp"

namespace riceband {

namespace {

// Exact zeros are their own events; sign changes are only counted between
// immediately consecutive nonzero samples.
int sign_of(double v) { return v < 0.0 ? -1 : (v > 0.0 ? 1 : 0); }

}  // namespace

double count_zeros_1d(std::span<const double> t, std::span<const double> values) {
  const std::size_t n = values.size();
  if (n < 2 || t.size() != n) throw std::invalid_argument("count_zeros_1d: need >= 2 samples");
  for (std::size_t i = 0; i + 1 < n; ++i) {
    if (!(t[i] < t[i + 1])) throw std::invalid_argument("count_zeros_1d: unsorted abscissas");
  }
  for (double v : values) {
    if (!std::isfinite(v)) throw std::invalid_argument("count_zeros_1d: non-finite value");
  }

  double count = 0.0;
  int prev_sign = 0;
  bool in_zero_run = false;
  bool run_touches_start = false;
  for (std::size_t i = 0; i < n; ++i) {
    const int s = sign_of(values[i]);
    if (s == 0) {
      if (!in_zero_run) {
        in_zero_run = true;
        run_touches_start = (i == 0);
      }
      continue;
    }
    if (in_zero_run) {
      count += run_touches_start ? 0.5 : 1.0;
      in_zero_run = false;
    } else if (prev_sign != 0 && s != prev_sign) {
      count += 1.0;
    }
    prev_sign = s;
  }
  if (in_zero_run) count += 0.5;  // run reaching the right endpoint
  return count;
}

double kac_counting_integral(const ScalarField& f, double a, double b, double R,
                             int u_nodes_per_unit, int t_nodes) {
  if (!(R > 0.0)) throw std::invalid_argument("kac_counting_integral: need R > 0");
  if (t_nodes < 16 || u_nodes_per_unit < 16) {
    throw std::invalid_argument("kac_counting_integral: need >= 16 nodes");
  }
  const TruncatedCosRule cos_rule(R, u_nodes_per_unit);
  // the t integrand oscillates at frequency up to R |f'|; t_nodes is a floor
  const int effective = std::max(t_nodes, static_cast<int>(16.0 * R));
  const QuadRule t_rule = axis_rule(effective, a, b);
  double grad = 0.0;
  double sum = 0.0;
  for (std::size_t i = 0; i < t_rule.nodes.size(); ++i) {
    const double x = t_rule.nodes[i];
    const double v = f(std::span<const double>(&x, 1), std::span<double>(&grad, 1));
    sum += t_rule.weights[i] * std::abs(grad) * cos_rule(v);
  }
  return sum / (2.0 * std::numbers::pi);
}

namespace {

ZeroSetMesh extract_1d(std::span<const double> values, const DomainBox& box,
                       const GridSpec& spec) {
  ZeroSetMesh mesh;
  mesh.dim = 1;
  const std::vector<double> nodes = axis_nodes(box, spec, 0);
  const std::size_t n = nodes.size();
  std::size_t i = 0;
  while (i < n) {
    if (sign_of(values[i]) == 0) {
      std::size_t j = i;
      while (j + 1 < n && sign_of(values[j + 1]) == 0) ++j;
      mesh.vertices.push_back(0.5 * (nodes[i] + nodes[j]));
      mesh.cells.push_back(static_cast<int>(mesh.n_vertices() - 1));
      i = j + 1;
      continue;
    }
    if (i + 1 < n && sign_of(values[i + 1]) != 0 && sign_of(values[i]) != sign_of(values[i + 1])) {
      const double tt = values[i] / (values[i] - values[i + 1]);
      mesh.vertices.push_back(nodes[i] + tt * (nodes[i + 1] - nodes[i]));
      mesh.cells.push_back(static_cast<int>(mesh.n_vertices() - 1));
    }
    ++i;
  }
  return mesh;
}

struct Point2 {
  double x, y;
};

Point2 interp2(const Point2& p0, double v0, const Point2& p1, double v1) {
  const double t = v0 / (v0 - v1);
  return {p0.x + t * (p1.x - p0.x), p0.y + t * (p1.y - p0.y)};
}

ZeroSetMesh extract_2d(std::span<const double> values, const DomainBox& box,
                       const GridSpec& spec) {
  ZeroSetMesh mesh;
  mesh.dim = 2;
  const std::vector<double> xs = axis_nodes(box, spec, 0);
  const std::vector<double> ys = axis_nodes(box, spec, 1);
  const std::size_t ny = ys.size();

  auto val = [&](std::size_t ix, std::size_t iy) { return values[ix * ny + iy]; };
  auto add_segment = [&](const Point2& a, const Point2& b) {
    if (std::hypot(b.x - a.x, b.y - a.y) <= 1e-14) return;
    const int base = static_cast<int>(mesh.n_vertices());
    mesh.vertices.insert(mesh.vertices.end(), {a.x, a.y, b.x, b.y});
    mesh.cells.insert(mesh.cells.end(), {base, base + 1});
  };

  for (std::size_t ix = 0; ix + 1 < xs.size(); ++ix) {
    for (std::size_t iy = 0; iy + 1 < ny; ++iy) {
      // corners counterclockwise: a=(x,y), b=(x+1,y), c=(x+1,y+1), d=(x,y+1)
      const double va = val(ix, iy), vb = val(ix + 1, iy);
      const double vc = val(ix + 1, iy + 1), vd = val(ix, iy + 1);
      const Point2 pa{xs[ix], ys[iy]}, pb{xs[ix + 1], ys[iy]};
      const Point2 pc{xs[ix + 1], ys[iy + 1]}, pd{xs[ix], ys[iy + 1]};
      const bool na = va < 0.0, nb = vb < 0.0, nc = vc < 0.0, nd = vd < 0.0;
      const int mask = (na ? 1 : 0) | (nb ? 2 : 0) | (nc ? 4 : 0) | (nd ? 8 : 0);
      if (mask == 0 || mask == 15) continue;

      const Point2 eab = interp2(pa, va, pb, vb);  // valid only when used
      const Point2 ebc = interp2(pb, vb, pc, vc);
      const Point2 ecd = interp2(pc, vc, pd, vd);
      const Point2 eda = interp2(pd, vd, pa, va);

      switch (mask) {
        case 1: case 14: add_segment(eda, eab); break;
        case 2: case 13: add_segment(eab, ebc); break;
        case 4: case 11: add_segment(ebc, ecd); break;
        case 8: case 7:  add_segment(ecd, eda); break;
        case 3: case 12: add_segment(eda, ebc); break;
        case 6: case 9:  add_segment(eab, ecd); break;
        case 5: case 10: {
          // Ambiguous saddle: the bilinear interpolant's critical value
          // decides which diagonal pair of corners shares a component.
          const double denom = va + vc - vb - vd;
          const double saddle = std::abs(denom) > 1e-300 ? (va * vc - vb * vd) / denom : 0.0;
          const bool diag_ac_negative = (mask == 5);
          // ac_joined: corners a and c lie in one component across the center,
          // so the two contour arcs hug corners b and d.
          const bool ac_joined = diag_ac_negative ? (saddle < 0.0) : (saddle >= 0.0);
          if (ac_joined) {
            add_segment(eab, ebc);
            add_segment(ecd, eda);
          } else {
            add_segment(eda, eab);
            add_segment(ebc, ecd);
          }
          break;
        }
        default: break;
      }
    }
  }
  return mesh;
}

ZeroSetMesh extract_3d(std::span<const double> values, const DomainBox& box,
                       const GridSpec& spec) {
  ZeroSetMesh mesh;
  mesh.dim = 3;
  const std::vector<double> xs = axis_nodes(box, spec, 0);
  const std::vector<double> ys = axis_nodes(box, spec, 1);
  const std::vector<double> zs = axis_nodes(box, spec, 2);
  const std::size_t n1 = ys.size(), n2 = zs.size();

  auto val = [&](std::size_t i, std::size_t j, std::size_t k) {
    return values[(i * n1 + j) * n2 + k];
  };

  // cube corner offsets in the classic numbering
  static constexpr int kCorner[8][3] = {{0, 0, 0}, {1, 0, 0}, {1, 1, 0}, {0, 1, 0},
                                        {0, 0, 1}, {1, 0, 1}, {1, 1, 1}, {0, 1, 1}};
  static constexpr int kEdge[12][2] = {{0, 1}, {1, 2}, {2, 3}, {3, 0}, {4, 5}, {5, 6},
                                       {6, 7}, {7, 4}, {0, 4}, {1, 5}, {2, 6}, {3, 7}};

  std::array<double, 8> cv;
  std::array<std::array<double, 3>, 8> cp;
  std::array<std::array<double, 3>, 12> ep;

  for (std::size_t i = 0; i + 1 < xs.size(); ++i) {
    for (std::size_t j = 0; j + 1 < ys.size(); ++j) {
      for (std::size_t k = 0; k + 1 < zs.size(); ++k) {
        int mask = 0;
        for (int c = 0; c < 8; ++c) {
          const std::size_t ci = i + static_cast<std::size_t>(kCorner[c][0]);
          const std::size_t cj = j + static_cast<std::size_t>(kCorner[c][1]);
          const std::size_t ck = k + static_cast<std::size_t>(kCorner[c][2]);
          cv[static_cast<std::size_t>(c)] = val(ci, cj, ck);
          cp[static_cast<std::size_t>(c)] = {xs[ci], ys[cj], zs[ck]};
          if (cv[static_cast<std::size_t>(c)] < 0.0) mask |= (1 << c);
        }
        if (mask == 0 || mask == 255) continue;

        const int8_t* tri = detail::kTriTable[mask];
        for (int e = 0; e < 12; ++e) {
          const double v0 = cv[static_cast<std::size_t>(kEdge[e][0])];
          const double v1 = cv[static_cast<std::size_t>(kEdge[e][1])];
          if ((v0 < 0.0) == (v1 < 0.0)) continue;
          const double t = v0 / (v0 - v1);
          const auto& p0 = cp[static_cast<std::size_t>(kEdge[e][0])];
          const auto& p1 = cp[static_cast<std::size_t>(kEdge[e][1])];
          for (int c = 0; c < 3; ++c) {
            ep[static_cast<std::size_t>(e)][static_cast<std::size_t>(c)] =
                p0[static_cast<std::size_t>(c)] + t * (p1[static_cast<std::size_t>(c)] - p0[static_cast<std::size_t>(c)]);
          }
        }

        for (int tv = 0; tri[tv] != -1; tv += 3) {
          const auto& a = ep[static_cast<std::size_t>(tri[tv])];
          const auto& b = ep[static_cast<std::size_t>(tri[tv + 1])];
          const auto& c = ep[static_cast<std::size_t>(tri[tv + 2])];
          const double ux = b[0] - a[0], uy = b[1] - a[1], uz = b[2] - a[2];
          const double vx = c[0] - a[0], vy = c[1] - a[1], vz = c[2] - a[2];
          const double cxp = uy * vz - uz * vy;
          const double cyp = uz * vx - ux * vz;
          const double czp = ux * vy - uy * vx;
          const double area = 0.5 * std::sqrt(cxp * cxp + cyp * cyp + czp * czp);
          if (area <= 1e-14) continue;
          const int base = static_cast<int>(mesh.n_vertices());
          mesh.vertices.insert(mesh.vertices.end(), {a[0], a[1], a[2], b[0], b[1], b[2], c[0], c[1], c[2]});
          mesh.cells.insert(mesh.cells.end(), {base, base + 1, base + 2});
        }
      }
    }
  }
  return mesh;
}

}  // namespace

ZeroSetMesh extract_zero_set(std::span<const double> values, const DomainBox& box,
                             const GridSpec& spec) {
  if (spec.dim() != box.dim()) throw std::invalid_argument("extract_zero_set: dimension mismatch");
  if (values.size() != spec.total_points()) {
    throw std::invalid_argument("extract_zero_set: value count does not match grid");
  }
  for (double v : values) {
    if (!std::isfinite(v)) throw std::invalid_argument("extract_zero_set: non-finite value");
  }
  switch (box.dim()) {
    case 1: return extract_1d(values, box, spec);
    case 2: return extract_2d(values, box, spec);
    case 3: return extract_3d(values, box, spec);
    default: throw std::invalid_argument("extract_zero_set: only d <= 3 supported");
  }
}

double mesh_area(const ZeroSetMesh& mesh) {
  if (mesh.dim == 1) return static_cast<double>(mesh.n_cells());
  double total = 0.0;
  if (mesh.dim == 2) {
    for (std::size_t c = 0; c < mesh.n_cells(); ++c) {
      const std::size_t a = static_cast<std::size_t>(mesh.cells[2 * c]) * 2;
      const std::size_t b = static_cast<std::size_t>(mesh.cells[2 * c + 1]) * 2;
      total += std::hypot(mesh.vertices[b] - mesh.vertices[a], mesh.vertices[b + 1] - mesh.vertices[a + 1]);
    }
    return total;
  }
  if (mesh.dim == 3) {
    for (std::size_t c = 0; c < mesh.n_cells(); ++c) {
      const std::size_t a = static_cast<std::size_t>(mesh.cells[3 * c]) * 3;
      const std::size_t b = static_cast<std::size_t>(mesh.cells[3 * c + 1]) * 3;
      const std::size_t d = static_cast<std::size_t>(mesh.cells[3 * c + 2]) * 3;
      const double ux = mesh.vertices[b] - mesh.vertices[a];
      const double uy = mesh.vertices[b + 1] - mesh.vertices[a + 1];
      const double uz = mesh.vertices[b + 2] - mesh.vertices[a + 2];
      const double vx = mesh.vertices[d] - mesh.vertices[a];
      const double vy = mesh.vertices[d + 1] - mesh.vertices[a + 1];
      const double vz = mesh.vertices[d + 2] - mesh.vertices[a + 2];
      const double cx = uy * vz - uz * vy;
      const double cy = uz * vx - ux * vz;
      const double cz = ux * vy - uy * vx;
      total += 0.5 * std::sqrt(cx * cx + cy * cy + cz * cz);
    }
    return total;
  }
  return 0.0;
}

void write_mesh(std::ostream& os, const ZeroSetMesh& mesh) {
  os << mesh.dim << ' ' << mesh.n_vertices() << ' ' << mesh.n_cells() << '\n';
  for (std::size_t i = 0; i < mesh.n_vertices(); ++i) {
    for (int c = 0; c < mesh.dim; ++c) {
      if (c) os << ' ';
      os << format_double(mesh.vertices[i * static_cast<std::size_t>(mesh.dim) + static_cast<std::size_t>(c)]);
    }
    os << '\n';
  }
  for (std::size_t i = 0; i < mesh.n_cells(); ++i) {
    for (int c = 0; c < mesh.cell_size(); ++c) {
      if (c) os << ' ';
      os << mesh.cells[i * static_cast<std::size_t>(mesh.cell_size()) + static_cast<std::size_t>(c)];
    }
    os << '\n';
  }
}

ZeroSetMesh read_mesh(std::istream& is) {
  ZeroSetMesh mesh;
  std::size_t nv = 0, nc = 0;
  if (!(is >> mesh.dim >> nv >> nc)) throw std::runtime_error("read_mesh: bad header");
  mesh.vertices.resize(nv * static_cast<std::size_t>(mesh.dim));
  for (double& v : mesh.vertices) {
    if (!(is >> v)) throw std::runtime_error("read_mesh: bad vertex data");
  }
  mesh.cells.resize(nc * static_cast<std::size_t>(mesh.cell_size()));
  for (int& c : mesh.cells) {
    if (!(is >> c)) throw std::runtime_error("read_mesh: bad cell data");
  }
  return mesh;
}

LineFamily build_line_family(const DomainBox& box, std::span<const double> direction,
                             int lines_per_axis) {
  const int d = box.dim();
  if (static_cast<int>(direction.size()) != d || d < 2) {
    throw std::invalid_argument("build_line_family: need d >= 2 and matching direction");
  }
  // orthonormal basis of direction^perp by Gram-Schmidt over coordinate axes
  std::vector<std::vector<double>> basis;
  for (int j = 0; j < d && static_cast<int>(basis.size()) < d - 1; ++j) {
    std::vector<double> u(static_cast<std::size_t>(d), 0.0);
    u[static_cast<std::size_t>(j)] = 1.0;
    const double ds = direction[static_cast<std::size_t>(j)];
    for (int i = 0; i < d; ++i) u[static_cast<std::size_t>(i)] -= ds * direction[static_cast<std::size_t>(i)];
    for (const auto& b : basis) {
      const double p = dot(u, b);
      for (int i = 0; i < d; ++i) u[static_cast<std::size_t>(i)] -= p * b[static_cast<std::size_t>(i)];
    }
    const double nrm = norm(u);
    if (nrm < 1e-8) continue;
    for (double& x : u) x /= nrm;
    basis.push_back(std::move(u));
  }
  if (static_cast<int>(basis.size()) != d - 1) {
    throw std::runtime_error("build_line_family: failed to build orthogonal basis");
  }

  // extent of the box projection along each basis vector
  std::vector<double> lo(basis.size(), 0.0), hi(basis.size(), 0.0);
  for (std::size_t b = 0; b < basis.size(); ++b) {
    double mn = 0.0, mx = 0.0;
    for (int i = 0; i < d; ++i) {
      const double c = basis[b][static_cast<std::size_t>(i)];
      mn += c * (c >= 0.0 ? box.lower(i) : box.upper(i));
      mx += c * (c >= 0.0 ? box.upper(i) : box.lower(i));
    }
    lo[b] = mn;
    hi[b] = mx;
  }

  LineFamily fam;
  fam.direction.assign(direction.begin(), direction.end());
  fam.cell_measure = 1.0;
  std::vector<double> h(basis.size());
  for (std::size_t b = 0; b < basis.size(); ++b) {
    h[b] = (hi[b] - lo[b]) / lines_per_axis;
    fam.cell_measure *= h[b];
  }

  std::vector<int> idx(basis.size(), 0);
  const std::size_t n_lines = static_cast<std::size_t>(
      std::pow(static_cast<double>(lines_per_axis), static_cast<double>(basis.size())) + 0.5);
  fam.base_points.reserve(n_lines * static_cast<std::size_t>(d));
  for (std::size_t p = 0; p < n_lines; ++p) {
    std::vector<double> y(static_cast<std::size_t>(d), 0.0);
    for (std::size_t b = 0; b < basis.size(); ++b) {
      const double c = lo[b] + (idx[b] + 0.5) * h[b];
      for (int i = 0; i < d; ++i) y[static_cast<std::size_t>(i)] += c * basis[b][static_cast<std::size_t>(i)];
    }
    fam.base_points.insert(fam.base_points.end(), y.begin(), y.end());
    for (int b = static_cast<int>(basis.size()) - 1; b >= 0; --b) {
      if (++idx[static_cast<std::size_t>(b)] < lines_per_axis) break;
      idx[static_cast<std::size_t>(b)] = 0;
    }
  }
  return fam;
}

bool clip_line_to_box(const DomainBox& box, std::span<const double> base,
                      std::span<const double> dir, double& t0, double& t1) {
  t0 = -std::numeric_limits<double>::infinity();
  t1 = std::numeric_limits<double>::infinity();
  for (int i = 0; i < box.dim(); ++i) {
    const double b = base[static_cast<std::size_t>(i)];
    const double s = dir[static_cast<std::size_t>(i)];
    if (std::abs(s) < 1e-14) {
      if (b < box.lower(i) || b > box.upper(i)) return false;
      continue;
    }
    double ta = (box.lower(i) - b) / s;
    double tb = (box.upper(i) - b) / s;
    if (ta > tb) std::swap(ta, tb);
    t0 = std::max(t0, ta);
    t1 = std::min(t1, tb);
  }
  return t0 < t1 && std::isfinite(t0) && std::isfinite(t1);
}

double favard_area(const ScalarField& g, const DomainBox& box, const SphereRule& rule,
                   int lines_per_direction, int samples_per_line, Exec exec) {
  const int d = box.dim();
  if (d < 2) throw std::invalid_argument("favard_area: need d >= 2");
  if (rule.dim != d) throw std::invalid_argument("favard_area: sphere rule dimension mismatch");
  if (lines_per_direction < 1 || samples_per_line < 2) {
    throw std::invalid_argument("favard_area: bad discretization parameters");
  }

  std::vector<double> per_direction(rule.size(), 0.0);
  parallel_for(rule.size(), exec, [&](std::size_t di) {
    const std::span<const double> s = rule.node(di);
    const LineFamily fam = build_line_family(box, s, lines_per_direction);
    const std::size_t m = static_cast<std::size_t>(samples_per_line);
    std::vector<double> ts(m), vals(m), pt(static_cast<std::size_t>(d));
    double total = 0.0;
    for (std::size_t li = 0; li < fam.n_lines(d); ++li) {
      const std::span<const double> y(fam.base_points.data() + li * static_cast<std::size_t>(d),
                                      static_cast<std::size_t>(d));
      double t0 = 0.0, t1 = 0.0;
      if (!clip_line_to_box(box, y, s, t0, t1)) continue;
      for (std::size_t j = 0; j < m; ++j) {
        ts[j] = t0 + (t1 - t0) * static_cast<double>(j) / static_cast<double>(m - 1);
        for (int i = 0; i < d; ++i) {
          pt[static_cast<std::size_t>(i)] = y[static_cast<std::size_t>(i)] + ts[j] * s[static_cast<std::size_t>(i)];
        }
        vals[j] = g(pt, {});
      }
      total += count_zeros_1d(ts, vals);
    }
    per_direction[di] = rule.weights[di] * total * fam.cell_measure;
  });

  const double c = std::tgamma(0.5 * (d + 1)) / (2.0 * std::pow(std::numbers::pi, 0.5 * (d - 1)));
  return c * pairwise_sum(per_direction);
}

}  // namespace riceband
