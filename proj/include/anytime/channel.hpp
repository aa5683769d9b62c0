#pragma once

#include <cstdint>
#include <vector>

#include "anytime/rng.hpp"

namespace anytime {

enum class Sym : std::uint8_t { Zero = 0, One = 1, Erased = 2 };

// Memoryless binary erasure channel. Erasure decisions are keyed by
// (seed, step, position), so the pattern for a step can be regenerated
// without replaying the stream.
struct ChannelConfig {
  double eps = 0.0;
  std::uint64_t seed = 0;
};

void validate(const ChannelConfig& cfg);  // eps in [0, 1)

std::vector<Sym> transmit(const ChannelConfig& cfg,
                          const std::vector<std::uint8_t>& bits, std::uint64_t t);

// Deterministic variant for tests: erase exactly where mask is set.
std::vector<Sym> erase_at(const std::vector<std::uint8_t>& bits,
                          const std::vector<std::uint8_t>& mask);

}  // namespace anytime
