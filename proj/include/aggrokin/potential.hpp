#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <filesystem>
#include <span>
#include <string>
#include <vector>

#include <json.hpp>

namespace aggrokin {

/// Spatial dimension is 1 or 2. Points are stored in fixed two-slot arrays;
/// the second coordinate is ignored when dim == 1.
using Point = std::array<double, 2>;

enum class KernelKind { indicator_box, triangle, truncated_gaussian, tabulated };

std::string to_string(KernelKind kind);
KernelKind kernel_kind_from_string(const std::string& name);

/// Nonnegative, even, compactly supported interaction kernel.
///
/// In d = 1 every kind is a function of |x|. In d = 2 the indicator kind is the
/// square [-h, h]^2 and the other kinds are radial profiles f(|x|).
/// Instances are immutable after construction.
class Potential {
 public:
  static Potential indicator_box(double half_width, double amplitude, int dim = 1);
  static Potential triangle(double half_width, double amplitude, int dim = 1);
  /// Gaussian a*exp(-r^2/(2 sigma^2)) cut at 6 sigma, not renormalized.
  static Potential truncated_gaussian(double sigma, double amplitude, int dim = 1);
  /// Piecewise-linear profile on uniformly spaced offsets 0, dx, ..., R.
  static Potential tabulated(std::vector<double> offsets, std::vector<double> values, int dim = 1);
  static Potential zero(int dim = 1) { return indicator_box(0.5, 0.0, dim); }

  /// Reads a two-column CSV with header `x,phi`. Offsets may cover [0, R] or a
  /// symmetric [-R, R]; spacing must be uniform.
  static Potential from_csv(const std::filesystem::path& path, int dim = 1);
  static Potential from_json(const nlohmann::json& desc);
  nlohmann::json to_json() const;

  KernelKind kind() const noexcept { return kind_; }
  int dim() const noexcept { return dim_; }
  double amplitude() const noexcept { return amplitude_; }
  /// Half-width for box/triangle, sigma for the Gaussian, table extent otherwise.
  double shape_length() const noexcept { return length_; }
  double cutoff_radius() const noexcept { return cutoff_; }
  /// Essential supremum of the kernel.
  double sup() const noexcept;
  bool is_zero() const noexcept { return sup() == 0.0; }

  /// Radial profile f(r) for r >= 0 (1D kinds and 2D radial kinds).
  double profile(double r) const noexcept;
  double operator()(double x) const noexcept;
  double operator()(double x, double y) const noexcept;
  double operator()(const Point& p) const noexcept {
    return dim_ == 1 ? (*this)(p[0]) : (*this)(p[0], p[1]);
  }

  /// Radii where the profile has a kink; quadrature splits panels there.
  std::vector<double> breakpoints() const;

  std::span<const double> table_values() const noexcept { return table_; }
  double table_spacing() const noexcept { return table_dx_; }

 private:
  Potential(KernelKind kind, int dim, double length, double amplitude, double cutoff);

  KernelKind kind_;
  int dim_;
  double length_;
  double amplitude_;
  double cutoff_;
  std::vector<double> table_;
  double table_dx_ = 0.0;
};

/// Closed box in the simulation domain (second axis unused when dim == 1).
struct RegionSupport {
  Point lo{0.0, 0.0};
  Point hi{0.0, 0.0};
  int dim = 1;

  static RegionSupport interval(double lo, double hi);
  static RegionSupport box(Point lo, Point hi);

  bool contains(const Point& x) const noexcept;
  double volume() const noexcept;
  /// Euclidean distance from x to the box (0 inside).
  double distance(const Point& x) const noexcept;
  void validate() const;
};

/// beta = integral of phi over R^d.
double beta(const Potential& p);
/// C_phi = integral of 1 - exp(-phi) over R^d.
double c_phi(const Potential& p);
/// s_A(x) = integral over A of phi(x - y) dy.
double s_A(const Potential& p, const RegionSupport& a, const Point& x);
double s_A(const Potential& p, const RegionSupport& a, double x);
/// Phi_A = inf over x in A of s_A(x).
double phi_A(const Potential& p, const RegionSupport& a);

namespace quadrature {

/// Composite Simpson rule with `panels` (rounded up to even) subintervals.
template <class F>
double simpson(F&& f, double lo, double hi, int panels) {
  if (hi <= lo) return 0.0;
  if (panels % 2 != 0) ++panels;
  const double h = (hi - lo) / panels;
  double acc = f(lo) + f(hi);
  for (int i = 1; i < panels; ++i) acc += (i % 2 == 1 ? 4.0 : 2.0) * f(lo + i * h);
  return acc * h / 3.0;
}

/// Simpson over [lo, hi] with the interval split at every breakpoint inside it.
template <class F>
double simpson_split(F&& f, double lo, double hi, std::span<const double> breaks, int panels) {
  std::vector<double> cuts{lo};
  for (double b : breaks)
    if (b > lo && b < hi) cuts.push_back(b);
  cuts.push_back(hi);
  std::sort(cuts.begin(), cuts.end());
  double total = 0.0;
  const double width = hi - lo;
  for (std::size_t i = 0; i + 1 < cuts.size(); ++i) {
    const double share = (cuts[i + 1] - cuts[i]) / width;
    const int n = std::max(2, static_cast<int>(std::ceil(share * panels)));
    total += simpson(f, cuts[i], cuts[i + 1], n);
  }
  return total;
}

}  // namespace quadrature

}  // namespace aggrokin
