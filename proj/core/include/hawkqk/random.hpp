#pragma once

#include <cstdint>
#include <initializer_list>
#include <random>

namespace hawkqk {

using Rng = std::mt19937_64;

// Uniform double in [0, 1) with 53 random bits. Fixed mapping so draws are
// reproducible independent of the standard library's distribution code.
inline double uniform01(Rng& rng) { return static_cast<double>(rng() >> 11) * 0x1.0p-53; }

inline std::size_t uniform_index(Rng& rng, std::size_t n) {
  return static_cast<std::size_t>(uniform01(rng) * static_cast<double>(n));
}

// Independent stream keyed by a base seed and a path of stream ids.
Rng derive_rng(std::uint64_t seed, std::initializer_list<std::uint64_t> stream = {});

// Deterministic 64-bit child seed, used to give each pipeline stage its own seed.
std::uint64_t derive_seed(std::uint64_t seed, std::initializer_list<std::uint64_t> stream);

}  // namespace hawkqk
