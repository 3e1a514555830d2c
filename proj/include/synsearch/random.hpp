#pragma once

#include <cstdint>
#include <random>

namespace synsearch {

/// The engine's output sequence is fixed by the standard, so seeded runs are
/// portable. All variates are derived from it by hand for the same reason
/// (std:: distributions are implementation-defined).
using Rng = std::mt19937_64;

/// Uniform double in [0, 1) with 53 random bits.
inline double uniform01(Rng& rng) { return static_cast<double>(rng() >> 11) * 0x1.0p-53; }

}  // namespace synsearch
