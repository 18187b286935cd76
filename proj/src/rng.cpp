#include "riceband/rng.hpp"

#include <cmath>
#include <numbers>

namespace riceband {

std::uint64_t splitmix64(std::uint64_t& state) {
  std::uint64_t z = (state += 0x9e3779b97f4a7c15ull);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
  return z ^ (z >> 31);
}

std::uint64_t mix_seed(std::uint64_t base, std::uint64_t stream) {
  std::uint64_t state = base;
  (void)splitmix64(state);
  state ^= 0xd1b54a32d192ed03ull * (stream + 1);
  return splitmix64(state);
}

double GaussianStream::uniform() {
  // 53-bit mantissa, strictly inside (0, 1)
  const std::uint64_t bits = splitmix64(state_);
  return (static_cast<double>(bits >> 11) + 0.5) * 0x1.0p-53;
}

double GaussianStream::normal() {
  if (has_spare_) {
    has_spare_ = false;
    return spare_;
  }
  const double u1 = uniform();
  const double u2 = uniform();
  const double r = std::sqrt(-2.0 * std::log(u1));
  const double theta = 2.0 * std::numbers::pi * u2;
  spare_ = r * std::sin(theta);
  has_spare_ = true;
  return r * std::cos(theta);
}

}  // namespace riceband
