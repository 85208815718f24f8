#pragma once

#include <span>
#include <vector>

#include "aggrokin/convolution.hpp"
#include "aggrokin/equilibria.hpp"
#include "aggrokin/grid.hpp"

namespace aggrokin {

/// A field sampled on a time mesh t_0 < t_1 < ... (one grid vector per node).
struct TimeField {
  DomainGrid grid;
  std::vector<double> times;
  std::vector<std::vector<double>> values;

  std::size_t nodes() const noexcept { return times.size(); }
  /// Field constant in time on a uniform mesh of `intervals` steps over [t0, t0 + T].
  static TimeField constant(const DomainGrid& grid, std::span<const double> v, double t0, double T, int intervals);
  DensityField snapshot(std::size_t k) const { return DensityField(grid, values[k], times[k]); }
};

/// (Phi v)_t = exp(-G_t) u0 + lambda int_0^t exp(-(G_t - G_tau)) dtau with
/// G_t = m int_0^t exp(-(v_s * phi)) ds. G uses the trapezoid rule on the
/// mesh; the outer integral is exact for the resulting piecewise-linear G.
TimeField phi_map(const ModelParams& params, Convolver& conv, const TimeField& v, std::span<const double> u0);
TimeField phi_map(const ModelParams& params, const Potential& p, const TimeField& v, const DensityField& u0);

/// Largest T with lambda beta m T^2/2 + c beta m T <= 1/2.
double picard_window(const ModelParams& params, double beta, double c);

struct PicardResult {
  TimeField solution;
  double window = 0.0;
  std::vector<int> iterations;         ///< sweeps per window
  std::vector<double> window_ratios;   ///< largest measured contraction ratio per window
  double worst_ratio = 0.0;
  double first_change = 0.0;           ///< sup change of the very first sweep
};

/// Iterates the Phi-map from v^0 = u0 on consecutive windows [kT, (k+1)T]
/// until the sup change over the window drops below `tol`, restarting each
/// window from the final state of the previous one.
PicardResult solve_picard(const ModelParams& params, const Potential& p, const DensityField& u0, double c, double tol,
                          double horizon, int nodes_per_window = 64);

}  // namespace aggrokin
