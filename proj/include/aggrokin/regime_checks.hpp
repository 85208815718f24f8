#pragma once

#include <cstdint>
#include <utility>
#include <vector>

#include <json.hpp>

#include "aggrokin/equilibria.hpp"
#include "aggrokin/grid.hpp"

namespace aggrokin {

struct BoundedReport {
  double kappa1 = 0.0;
  double kappa2 = 0.0;
  double max_value = 0.0;
  double min_value = 0.0;
  bool interval_variant = false;  ///< kappa1 <= u0 <= c held initially
  double c = 0.0;
  double tolerance = 1e-6;
  bool pass = false;
};

/// Runs the MOL solver in the regulation regime and checks u_t <= kappa2, and
/// kappa1 <= u_t <= c when the initial data already lies in [kappa1, c].
BoundedReport check_bounded_regime(const ModelParams& params, const Potential& p, const DensityField& u0,
                                   double t_end, double dt = 0.0);

struct ComparisonReport {
  double max_violation = 0.0;  ///< largest u1 - u2 seen at report times
  std::size_t reports = 0;
  double tolerance = 1e-6;
  bool pass = false;
};

ComparisonReport check_comparison(const ModelParams& params, const Potential& p, const DensityField& low,
                                  const DensityField& high, double t_end, double dt = 0.0);

struct StabilityReport {
  double kappa1 = 0.0;
  double t_end = 0.0;
  double initial_deviation = 0.0;
  double max_deviation = 0.0;
  double final_deviation = 0.0;
  double measured_rate = 0.0;     ///< slope of log deviation over [t_end/8, t_end/4]
  double linearized_rate = 0.0;   ///< -m e^{-beta kappa1} (1 - beta kappa1), constant mode
  bool bounded = false;
  bool decayed = false;
  bool pass = false;
  std::vector<std::pair<double, double>> history;
};

/// Zero-mean smooth random field (a few low Fourier modes) scaled to sup norm 1.
DensityField random_smooth_field(const DomainGrid& grid, std::uint64_t seed, int modes = 4);

/// Default horizon 50 / (m e^{-beta kappa1}).
double stability_horizon(const ModelParams& params, double beta);

StabilityReport check_stability(const ModelParams& params, const Potential& p, const DomainGrid& grid,
                                double amplitude, std::uint64_t seed, double t_end = 0.0);
/// Same check for an explicit perturbation field added to kappa1.
StabilityReport check_stability_field(const ModelParams& params, const Potential& p, const DensityField& perturbation,
                                      double t_end = 0.0);

nlohmann::json to_json(const BoundedReport& r);
nlohmann::json to_json(const ComparisonReport& r);
nlohmann::json to_json(const StabilityReport& r);

}  // namespace aggrokin
