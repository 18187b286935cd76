#pragma once

#include <cstdint>

namespace riceband {

// SplitMix64 step; also the per-replicate seed derivation
// replicate_seed = mix(base_seed, replicate_index).
std::uint64_t splitmix64(std::uint64_t& state);
std::uint64_t mix_seed(std::uint64_t base, std::uint64_t stream);

// Deterministic Gaussian stream (SplitMix64 + Box-Muller). Self-contained so
// results do not depend on the standard library's normal_distribution.
class GaussianStream {
 public:
  explicit GaussianStream(std::uint64_t seed) : state_(seed ^ 0x6a09e667f3bcc909ull) {}

  double uniform();  // in (0, 1)
  double normal();

 private:
  std::uint64_t state_;
  double spare_ = 0.0;
  bool has_spare_ = false;
};

}  // namespace riceband
