#include "aggrokin/rng.hpp"

#include <cmath>

namespace aggrokin {

double uniform01(Rng& rng) { return static_cast<double>(rng() >> 11) * 0x1.0p-53; }

double exponential(Rng& rng, double rate) { return -std::log1p(-uniform01(rng)) / rate; }

std::uint64_t poisson(Rng& rng, double mean) {
  if (!(mean > 0.0)) return 0;
  std::poisson_distribution<std::uint64_t> dist(mean);
  return dist(rng);
}

}  // namespace aggrokin
