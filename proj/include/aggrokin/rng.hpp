#pragma once

#include <cstdint>
#include <random>

namespace aggrokin {

/// All stochastic code draws from a 64-bit Mersenne twister. Replica r of a
/// run with base seed s is seeded with s + r.
using Rng = std::mt19937_64;

inline std::uint64_t replica_seed(std::uint64_t base, std::uint64_t replica) { return base + replica; }

/// Uniform on [0, 1) with 53 random bits.
double uniform01(Rng& rng);
/// Exponential waiting time with the given rate (> 0).
double exponential(Rng& rng, double rate);
std::uint64_t poisson(Rng& rng, double mean);

}  // namespace aggrokin
