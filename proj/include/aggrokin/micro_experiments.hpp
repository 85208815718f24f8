#pragma once

#include <cstdint>
#include <vector>

#include <json.hpp>

#include "aggrokin/equilibria.hpp"
#include "aggrokin/estimators.hpp"
#include "aggrokin/grid.hpp"

namespace aggrokin {

struct CompareOptions {
  std::vector<double> eps_list{1.0, 0.5, 0.25};
  double t_end = 1.0;
  int replicas = 64;
  std::uint64_t seed = 1;
  int density_bins = 20;
  double pair_r_max = 2.5;
  int pair_bins = 5;
  int k1_bins = 64;
  double z_tolerance = 3.0;
  int threads = 0;  ///< 0 keeps the OpenMP default
};

struct EpsilonResult {
  double epsilon = 0.0;
  DensityEstimate density;
  PairEstimate pairs;
  std::vector<double> meso;      ///< bin averages of u_t
  std::vector<double> z;         ///< |k1 - u_t| / stderr per bin
  double max_z = 0.0;
  double discrepancy = 0.0;      ///< RMS of k1 - u_t over bins
  double max_chaos_z = 0.0;      ///< max |ratio - 1| / stderr beyond the first distance bin
  std::uint64_t events = 0;
};

struct CompareReport {
  std::vector<EpsilonResult> runs;  ///< in the order of eps_list
  bool density_pass = false;        ///< max_z <= tolerance at the smallest epsilon
  bool monotone_pass = false;       ///< discrepancy nonincreasing as epsilon decreases
  bool chaos_pass = false;          ///< max_chaos_z <= tolerance at the smallest epsilon
  bool pass = false;
  nlohmann::json to_json() const;
};

/// Meso solution vs epsilon-scaled particle replicas started from Poisson(u0/epsilon).
/// One-dimensional only; needs at least 64 replicas.
CompareReport micro_meso_compare(const ModelParams& params, const Potential& p, const DensityField& u0,
                                 const CompareOptions& opts);

struct GrowthOptions {
  double L = 10.0;
  double t_end = 5.0;
  int samples = 21;
  int replicas = 32;
  std::uint64_t seed = 1;
  std::size_t cap = 200'000;
  int threads = 0;
};

struct GrowthCurve {
  std::size_t initial_count = 0;
  std::vector<double> times, mean, stderr_;
  std::size_t capped_replicas = 0;
};

struct GrowthReport {
  GrowthCurve seeded, baseline;
  bool seeded_grows = false;      ///< final mean count exceeds the initial count
  bool baseline_levels_off = false;  ///< last-quarter relative change under 10%
  nlohmann::json to_json() const;
};

/// epsilon = 1 runs: `initial_count` particles uniform in the region vs an
/// empty start, tracking the mean count inside the region.
GrowthReport fluctuation_growth_demo(const ModelParams& params, const Potential& p, const RegionSupport& region,
                                     std::size_t initial_count, const GrowthOptions& opts);

}  // namespace aggrokin
