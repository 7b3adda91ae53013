#pragma once

#include <cstdint>
#include <random>

namespace fhtd {

/// Roles of independent random streams inside one simulated dataset.
/// Each (seed, role, index) triple maps to its own generator, so adding
/// covariate series never perturbs the error draws and vice versa.
enum class StreamRole : std::uint32_t {
  errors = 0,
  common_factor = 1,
  covariate = 2,
  arch_driver = 3,
  auxiliary = 4,
};

using Rng = std::mt19937_64;

Rng make_stream(std::uint64_t seed, StreamRole role, std::uint64_t index = 0);

/// Seed of replication `rep` in an experiment seeded with `seed`.
constexpr std::uint64_t replication_seed(std::uint64_t seed, std::uint64_t rep) {
  return seed ^ rep;
}

}  // namespace fhtd
