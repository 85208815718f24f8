#pragma once

#include <filesystem>
#include <vector>

#include <json.hpp>

#include "aggrokin/equilibria.hpp"
#include "aggrokin/grid.hpp"

namespace aggrokin {

struct FrontOptions {
  double report_every = 0.05;
  double dt = 0.0;               ///< 0 picks default_dt
  bool stop_when_crossed = true; ///< end early once every probe crossed the level
  bool stop_at_wrap_guard = true; ///< end once the level set reaches L/4
};

/// Arrival times of the growth front at probe points, plus the growth bounds
/// sampled on the certificate region.
struct FrontTrace {
  std::vector<double> probes;
  std::vector<double> t_level;  ///< first crossing of the threshold; NaN if none
  std::vector<double> t_speed;  ///< first report time with udot >= v held for one interval; NaN if none
  double threshold = 0.0;
  double v = 0.0;
  double t_end = 0.0;           ///< time actually integrated to
  bool wrap_guard_hit = false;  ///< front reached L/4 from the periodic image

  // Samples on A (report times only).
  double udot_min_A = 0.0;
  double udot_max_A = 0.0;
  double gr_lower_margin = 0.0;  ///< min of u - (b + lambda t/kappa)
  double gr_upper_margin = 0.0;  ///< min of kappa b + lambda t - u
  double gr_worst_scaled = 0.0;  ///< most negative margin divided by (1 + lambda t)
  std::size_t samples_A = 0;

  void write_csv(const std::filesystem::path& path) const;
  nlohmann::json to_json() const;
};

/// Integrates from u0 (which must satisfy b < u0 < kappa b on the region) and
/// records the front. The certificate must be valid.
FrontTrace front_trace(const ModelParams& params, const Potential& p, const DensityField& u0,
                       const AggregationCertificate& cert, const std::vector<double>& probes, double t_end,
                       const FrontOptions& opts = {});

}  // namespace aggrokin
