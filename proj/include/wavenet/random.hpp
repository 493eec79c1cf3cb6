#pragma once

#include <cstdint>
#include <random>

namespace wavenet {

using Rng = std::mt19937_64;

// Independent streams derived from one run seed.
enum class Stream : std::uint64_t { data = 1, init = 2, shuffle = 3, test_data = 4, slicing = 5, gradcheck = 6 };

inline Rng make_rng(std::uint64_t seed, Stream stream) {
  std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                    static_cast<std::uint32_t>(stream)};
  return Rng(seq);
}

}  // namespace wavenet
