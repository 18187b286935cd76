#include "riceband/monte_carlo.hpp"

#include <cmath>
#include <ostream>
#include <stdexcept>

#include "riceband/rng.hpp"

namespace riceband {

namespace {

// Basis values for every grid point, row-major (point-major). Every ensemble
// is linear in its coefficients, so one replicate is a single matrix-vector
// product against this table.
std::vector<double> basis_table(const Ensemble& ensemble, std::span<const double> grid,
                                std::size_t n_points, Exec exec) {
  const std::size_t d = static_cast<std::size_t>(ensemble.dim);
  const std::size_t nc = static_cast<std::size_t>(ensemble.n_coefficients());
  std::vector<double> table(n_points * nc);
  parallel_for(n_points, exec, [&](std::size_t p) {
    ensemble_basis_values(ensemble, grid.subspan(p * d, d),
                          std::span<double>(table.data() + p * nc, nc));
  });
  return table;
}

}  // namespace

Estimate mc_expected_area(const Ensemble& ensemble, const DomainBox& box, const McConfig& cfg,
                          Exec exec, std::vector<double>* replicate_areas) {
  if (box.dim() != ensemble.dim || cfg.grid.dim() != ensemble.dim) {
    throw std::invalid_argument("mc_expected_area: dimension mismatch");
  }
  if (cfg.replicates < 1) throw std::invalid_argument("mc_expected_area: need replicates >= 1");
  const int d = ensemble.dim;
  if (d > 3 && cfg.method == AreaMethod::Mesh) {
    throw std::invalid_argument("mc_expected_area: mesh extraction supports d <= 3");
  }
  if (d == 1 && cfg.method == AreaMethod::Favard) {
    throw std::invalid_argument("mc_expected_area: favard needs d >= 2");
  }

  const std::size_t nc = static_cast<std::size_t>(ensemble.n_coefficients());
  const double offset = ensemble.kind == EnsembleKind::Spectral ? -ensemble.level : 0.0;
  std::vector<double> areas(static_cast<std::size_t>(cfg.replicates));

  const bool use_grid_values = (cfg.method != AreaMethod::Favard);
  std::vector<double> grid, table, abscissa;
  std::size_t n_points = 0;
  if (use_grid_values) {
    grid = tensor_grid(box, cfg.grid);
    n_points = cfg.grid.total_points();
    table = basis_table(ensemble, grid, n_points, exec);
    if (d == 1) abscissa = axis_nodes(box, cfg.grid, 0);
  }

  SphereRule favard_rule;
  if (cfg.method == AreaMethod::Favard) {
    favard_rule = build_sphere_rule(d, cfg.favard_sphere_resolution, /*seed=*/cfg.base_seed);
  }

  parallel_for(areas.size(), exec, [&](std::size_t r) {
    const std::uint64_t seed = mix_seed(cfg.base_seed, r);
    const std::vector<double> coeffs = sample_coefficients(ensemble, seed);

    if (use_grid_values) {
      std::vector<double> values(n_points);
      for (std::size_t p = 0; p < n_points; ++p) {
        double v = offset;
        const double* row = table.data() + p * nc;
        for (std::size_t k = 0; k < nc; ++k) v += row[k] * coeffs[k];
        values[p] = v;
      }
      if (d == 1) {
        areas[r] = count_zeros_1d(abscissa, values);
      } else {
        areas[r] = mesh_area(extract_zero_set(values, box, cfg.grid));
      }
    } else {
      const ScalarField field = realize_field(ensemble, coeffs);
      // each replicate counts crossings along its own line families serially
      areas[r] = favard_area(field, box, favard_rule, cfg.favard_lines, cfg.favard_samples,
                             Exec::Serial);
    }
  });

  if (replicate_areas) *replicate_areas = areas;
  return Estimate::from_samples(areas);
}

ComparisonReport compare(double theory, const Estimate& mc) {
  ComparisonReport report;
  report.theory = theory;
  report.mc = mc;
  if (!mc.has_stderr || mc.stderr_value == 0.0) {
    if (mc.value != theory) {
      throw std::invalid_argument("compare: zero standard error with a nonzero deviation");
    }
    report.z_score = 0.0;
    report.pass = true;
    return report;
  }
  report.z_score = (mc.value - theory) / mc.stderr_value;
  report.pass = std::abs(report.z_score) <= 3.0;
  return report;
}

std::vector<Estimate> grid_refinement_study(const Ensemble& ensemble, const DomainBox& box,
                                            const McConfig& cfg, std::span<const double> factors,
                                            Exec exec) {
  std::vector<Estimate> out;
  out.reserve(factors.size());
  for (double f : factors) {
    if (!(f > 0.0)) throw std::invalid_argument("grid_refinement_study: factors must be > 0");
    std::vector<int> points = cfg.grid.points_per_axis();
    for (int& p : points) {
      p = std::max(2, static_cast<int>(std::lround(p * f)));
    }
    McConfig refined = cfg;
    refined.grid = GridSpec(points);
    out.push_back(mc_expected_area(ensemble, box, refined, exec));
  }
  return out;
}

void write_replicates_csv(std::ostream& os, std::uint64_t base_seed,
                          std::span<const double> areas) {
  os << "replicate,seed,area\n";
  for (std::size_t r = 0; r < areas.size(); ++r) {
    os << r << ',' << mix_seed(base_seed, r) << ',' << format_double(areas[r]) << '\n';
  }
}

}  // namespace riceband
