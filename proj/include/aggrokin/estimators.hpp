#pragma once

#include <filesystem>
#include <span>
#include <vector>

#include <json.hpp>

#include "aggrokin/particles.hpp"

namespace aggrokin {

/// One configuration per replica, all taken at the same time.
using ReplicaSet = std::vector<std::vector<Point>>;

struct DensityEstimate {
  std::vector<double> edges;    ///< bin edges along the first axis
  std::vector<double> k1;       ///< epsilon * mean count / bin volume
  std::vector<double> stderr_;  ///< standard error of k1 across replicas
  std::size_t replicas = 0;

  std::vector<double> centers() const;
  void write_csv(const std::filesystem::path& path) const;
};

struct PairEstimate {
  std::vector<double> edges;  ///< distance bin edges
  std::vector<double> k2;     ///< epsilon^2 * mean ordered-pair count / (L^d * shell volume)
  std::vector<double> stderr_;
  std::vector<double> chaos_ratio;  ///< k2 over the pair integral of the mean k1
  std::vector<double> ratio_stderr; ///< delete-one jackknife over replicas
  std::size_t replicas = 0;

  std::vector<double> centers() const;
  void write_csv(const std::filesystem::path& path) const;
};

/// Histogram along the first axis over [-L/2, L/2) with `bins` equal slabs.
/// Needs at least 8 replicas.
DensityEstimate estimate_density(const ReplicaSet& snapshots, double epsilon, double L, int dim, int bins);

/// Ordered pairs binned by minimum-image distance on [0, r_max) with
/// `bins` equal shells. The chaos ratio uses a `k1_bins` histogram of the
/// replica-mean density for the product term.
PairEstimate estimate_pair_correlation(const ReplicaSet& snapshots, double epsilon, double L, int dim, double r_max,
                                       int bins, int k1_bins = 64);

nlohmann::json to_json(const DensityEstimate& e);
nlohmann::json to_json(const PairEstimate& e);

}  // namespace aggrokin
