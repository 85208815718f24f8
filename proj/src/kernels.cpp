#include "aggrokin/kernels.hpp"

#include <cmath>
#include <cstddef>

namespace aggrokin {

double Stencil::mass() const noexcept {
  double acc = 0.0;
  for (double x : w) acc += x;
  return acc;
}

namespace kernels {

namespace {

inline int wrap(int i, int n) {
  i %= n;
  return i < 0 ? i + n : i;
}

inline double convolve_cell(const Stencil& s, std::span<const double> u, int i, int j) {
  const int n = s.n;
  double acc = 0.0;
  if (s.dim == 1) {
    for (std::size_t k = 0; k < s.w.size(); ++k) acc += s.w[k] * u[wrap(i - s.di[k], n)];
  } else {
    for (std::size_t k = 0; k < s.w.size(); ++k)
      acc += s.w[k] * u[static_cast<std::size_t>(wrap(i - s.di[k], n)) * n + wrap(j - s.dj[k], n)];
  }
  return acc;
}

}  // namespace

void convolve_direct_serial(const Stencil& s, std::span<const double> u, std::span<double> out) {
  const int n = s.n;
  if (s.dim == 1) {
    for (int i = 0; i < n; ++i) out[i] = convolve_cell(s, u, i, 0);
  } else {
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) out[static_cast<std::size_t>(i) * n + j] = convolve_cell(s, u, i, j);
  }
}

void convolve_direct_parallel(const Stencil& s, std::span<const double> u, std::span<double> out) {
  const int n = s.n;
  if (s.dim == 1) {
#pragma omp parallel for schedule(static)
    for (int i = 0; i < n; ++i) out[i] = convolve_cell(s, u, i, 0);
  } else {
#pragma omp parallel for schedule(static)
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) out[static_cast<std::size_t>(i) * n + j] = convolve_cell(s, u, i, j);
  }
}

void rhs_serial(double m, double lambda, std::span<const double> u, std::span<const double> conv,
                std::span<double> out) {
  for (std::size_t i = 0; i < u.size(); ++i) out[i] = lambda - m * u[i] * std::exp(-conv[i]);
}

void rhs_parallel(double m, double lambda, std::span<const double> u, std::span<const double> conv,
                  std::span<double> out) {
  const auto n = static_cast<std::ptrdiff_t>(u.size());
#pragma omp parallel for schedule(static)
  for (std::ptrdiff_t i = 0; i < n; ++i) out[i] = lambda - m * u[i] * std::exp(-conv[i]);
}

void axpy_parallel(std::span<const double> a, double s, std::span<const double> b, std::span<double> out) {
  const auto n = static_cast<std::ptrdiff_t>(a.size());
#pragma omp parallel for schedule(static)
  for (std::ptrdiff_t i = 0; i < n; ++i) out[i] = a[i] + s * b[i];
}

void rk4_combine_parallel(std::span<double> u, double dt, std::span<const double> k1, std::span<const double> k2,
                          std::span<const double> k3, std::span<const double> k4) {
  const auto n = static_cast<std::ptrdiff_t>(u.size());
  const double c = dt / 6.0;
#pragma omp parallel for schedule(static)
  for (std::ptrdiff_t i = 0; i < n; ++i) u[i] += c * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]);
}

double max_abs_diff(std::span<const double> a, std::span<const double> b) {
  double m = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) m = std::max(m, std::abs(a[i] - b[i]));
  return m;
}

}  // namespace kernels

}  // namespace aggrokin
