#include "aggrokin/grid.hpp"

#include <algorithm>
#include <cmath>

#include "aggrokin/errors.hpp"

namespace aggrokin {

Point DomainGrid::node(std::size_t flat) const noexcept {
  if (dim == 1) return {coordinate(static_cast<int>(flat)), 0.0};
  return {coordinate(static_cast<int>(flat / n)), coordinate(static_cast<int>(flat % n))};
}

int DomainGrid::nearest(double x) const noexcept {
  const double s = (x + 0.5 * L) / pitch();
  long i = std::lround(s) % n;
  if (i < 0) i += n;
  return static_cast<int>(i);
}

std::size_t DomainGrid::nearest(const Point& x) const noexcept {
  return dim == 1 ? flat(nearest(x[0])) : flat(nearest(x[0]), nearest(x[1]));
}

void DomainGrid::validate() const {
  if (dim != 1 && dim != 2) throw Error(ErrorKind::domain, "meso_solver", "grid dimension must be 1 or 2");
  if (!(L > 0.0) || !std::isfinite(L)) throw Error(ErrorKind::domain, "meso_solver", "box length must be positive");
  if (n < 2 || (n & (n - 1)) != 0)
    throw Error(ErrorKind::domain, "meso_solver", "cells per axis must be a power of two, got " + std::to_string(n));
}

void DomainGrid::validate_for(const Potential& p) const {
  validate();
  if (p.dim() != dim) throw Error(ErrorKind::domain, "meso_solver", "potential and grid dimensions differ");
  const double cut = p.cutoff_radius();
  if (pitch() > cut / 4.0 * (1.0 + 1e-12))
    throw Error(ErrorKind::resolution, "potential",
                "grid pitch " + std::to_string(pitch()) + " exceeds cutoff/4 = " + std::to_string(cut / 4.0));
  if (!(L > 2.0 * cut))
    throw Error(ErrorKind::resolution, "potential", "box length must exceed twice the kernel cutoff");
}

DensityField::DensityField(DomainGrid g, std::vector<double> v, double t) : grid(g), values(std::move(v)), time(t) {
  if (values.size() != grid.size())
    throw Error(ErrorKind::domain, "meso_solver", "field size does not match the grid");
}

double DensityField::max() const { return *std::max_element(values.begin(), values.end()); }
double DensityField::min() const { return *std::min_element(values.begin(), values.end()); }

void DensityField::validate(double tol) const {
  for (std::size_t i = 0; i < values.size(); ++i) {
    if (!std::isfinite(values[i]))
      throw Error(ErrorKind::domain, "meso_solver", "non-finite density at cell " + std::to_string(i));
    if (values[i] < -tol)
      throw Error(ErrorKind::domain, "meso_solver", "negative density at cell " + std::to_string(i));
  }
}

DensityField DensityField::shifted(int k) const {
  DensityField out(grid, 0.0, time);
  const int n = grid.n;
  const int s = ((k % n) + n) % n;
  if (grid.dim == 1) {
    for (int i = 0; i < n; ++i) out.values[(i + s) % n] = values[i];
  } else {
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) out.values[grid.flat((i + s) % n, j)] = values[grid.flat(i, j)];
  }
  return out;
}

double interpolate(const DensityField& u, double x) {
  const auto& g = u.grid;
  double s = (x + 0.5 * g.L) / g.pitch();
  s -= g.n * std::floor(s / g.n);
  const int i0 = static_cast<int>(std::floor(s)) % g.n;
  const int i1 = (i0 + 1) % g.n;
  const double w = s - std::floor(s);
  return (1.0 - w) * u.values[i0] + w * u.values[i1];
}

double bin_average(const DensityField& u, double x0, double x1) {
  // Exact for the piecewise-linear interpolant: Simpson on each node interval.
  const double h = u.grid.pitch();
  const double origin = -0.5 * u.grid.L;
  std::vector<double> cuts{x0};
  for (double k = std::ceil((x0 - origin) / h); origin + k * h < x1; k += 1.0)
    if (origin + k * h > x0) cuts.push_back(origin + k * h);
  cuts.push_back(x1);
  double acc = 0.0;
  for (std::size_t i = 0; i + 1 < cuts.size(); ++i) {
    const double a = cuts[i], b = cuts[i + 1];
    acc += (b - a) * (interpolate(u, a) + interpolate(u, b)) / 2.0;
  }
  return acc / (x1 - x0);
}

}  // namespace aggrokin
