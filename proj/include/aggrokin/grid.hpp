#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include <json.hpp>

#include "aggrokin/potential.hpp"

namespace aggrokin {

/// Periodic grid on [-L/2, L/2)^d with nodes x_i = -L/2 + i*pitch.
/// Node i owns the cell [x_i - pitch/2, x_i + pitch/2).
struct DomainGrid {
  int dim = 1;
  double L = 1.0;
  int n = 64;

  double pitch() const noexcept { return L / n; }
  std::size_t size() const noexcept {
    return dim == 1 ? static_cast<std::size_t>(n) : static_cast<std::size_t>(n) * static_cast<std::size_t>(n);
  }
  double cell_volume() const noexcept { return dim == 1 ? pitch() : pitch() * pitch(); }
  double coordinate(int i) const noexcept { return -0.5 * L + i * pitch(); }
  Point node(std::size_t flat) const noexcept;
  std::size_t flat(int i, int j = 0) const noexcept {
    return dim == 1 ? static_cast<std::size_t>(i) : static_cast<std::size_t>(i) * n + static_cast<std::size_t>(j);
  }
  /// Index of the node nearest to x (periodic), per axis.
  int nearest(double x) const noexcept;
  std::size_t nearest(const Point& x) const noexcept;

  /// Structural checks: dim in {1,2}, n a power of two, L > 0.
  void validate() const;
  /// Checks resolution against a kernel: pitch <= cutoff/4 and L > 2 cutoff.
  void validate_for(const Potential& p) const;
  nlohmann::json to_json() const { return {{"dim", dim}, {"L", L}, {"n", n}}; }
};

/// Grid-sampled density u_t(x) with its time stamp.
struct DensityField {
  DomainGrid grid;
  std::vector<double> values;
  double time = 0.0;

  DensityField() = default;
  DensityField(DomainGrid g, double fill = 0.0, double t = 0.0) : grid(g), values(g.size(), fill), time(t) {}
  DensityField(DomainGrid g, std::vector<double> v, double t = 0.0);

  double max() const;
  double min() const;
  /// Throws if any value is non-finite or below -tol.
  void validate(double tol = 0.0) const;
  /// Circular shift by k cells along the first axis.
  DensityField shifted(int k) const;
};

/// Linear interpolation of a 1D periodic field at x.
double interpolate(const DensityField& u, double x);
/// Mean of the linear interpolant of a 1D periodic field over [x0, x1].
double bin_average(const DensityField& u, double x0, double x1);

}  // namespace aggrokin
