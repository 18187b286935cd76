#pragma once

#include <cstdint>
#include <iosfwd>
#include <span>
#include <vector>

#include "riceband/core.hpp"
#include "riceband/ensembles.hpp"
#include "riceband/sphere.hpp"
#include "riceband/zero_set.hpp"

namespace riceband {

enum class AreaMethod { Mesh, Favard, Crossings1d };

struct McConfig {
  int replicates = 500;
  GridSpec grid{1, 4096};
  std::uint64_t base_seed = 0;
  AreaMethod method = AreaMethod::Mesh;  // d=1 always counts crossings
  int favard_sphere_resolution = 180;    // only for AreaMethod::Favard
  int favard_lines = 96;
  int favard_samples = 512;
};

struct ComparisonReport {
  double theory = 0.0;
  Estimate mc;
  double z_score = 0.0;
  bool pass = false;
};

// Sample-mean zero-set area over independent replicates with counter-based
// per-replicate seeds. d=1 counts grid sign changes; d=2,3 measure the
// extracted mesh (or favard_area when configured).
Estimate mc_expected_area(const Ensemble& ensemble, const DomainBox& box, const McConfig& cfg,
                          Exec exec = Exec::Parallel, std::vector<double>* replicate_areas = nullptr);

// z = (mc - theory) / stderr with |z| <= 3 as the pass criterion. A zero
// stderr passes only on exact agreement and throws otherwise.
ComparisonReport compare(double theory, const Estimate& mc);

// One Estimate per grid-refinement factor (points scaled per axis).
std::vector<Estimate> grid_refinement_study(const Ensemble& ensemble, const DomainBox& box,
                                            const McConfig& cfg, std::span<const double> factors,
                                            Exec exec = Exec::Parallel);

// CSV with header "replicate,seed,area".
void write_replicates_csv(std::ostream& os, std::uint64_t base_seed,
                          std::span<const double> areas);

}  // namespace riceband
