#include "fhtd/rng.hpp"

#include <array>

namespace fhtd {

Rng make_stream(std::uint64_t seed, StreamRole role, std::uint64_t index) {
  const auto lo = [](std::uint64_t v) { return static_cast<std::uint32_t>(v & 0xffffffffu); };
  const auto hi = [](std::uint64_t v) { return static_cast<std::uint32_t>(v >> 32); };
  std::array<std::uint32_t, 6> words{lo(seed), hi(seed), static_cast<std::uint32_t>(role),
                                     lo(index), hi(index), 0x9e3779b9u};
  std::seed_seq seq(words.begin(), words.end());
  return Rng(seq);
}

}  // namespace fhtd
