#pragma once

#include <cstdint>
#include <random>

namespace vexleb {

// Per-trial seed derived from (seed, stream); stable across platforms.
std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t stream);

// Standard normal draw via Box-Muller, so sequences do not depend on the
// standard library's distribution implementation.
double standard_normal(std::mt19937_64& rng);

// Uniform draw in [0, 1) built from the top 53 bits.
double uniform01(std::mt19937_64& rng);

} // namespace vexleb
