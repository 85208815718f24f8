#pragma once

#include <span>
#include <vector>

namespace aggrokin {

/// Nonzero cell weights of a kernel on a periodic n (or n x n) grid, stored as
/// signed cell offsets. Weight w = integral of phi over the offset cell.
struct Stencil {
  int dim = 1;
  int n = 0;
  std::vector<int> di;
  std::vector<int> dj;
  std::vector<double> w;

  std::size_t size() const noexcept { return w.size(); }
  double mass() const noexcept;
};

/// Data-parallel inner loops. Each has a serial reference and an OpenMP
/// variant; the two must agree bit-for-bit because every output cell is
/// computed by the same sequence of operations.
namespace kernels {

/// out[x] = sum_k w_k u[x - d_k] (periodic).
void convolve_direct_serial(const Stencil& s, std::span<const double> u, std::span<double> out);
void convolve_direct_parallel(const Stencil& s, std::span<const double> u, std::span<double> out);

/// out = lambda - m u exp(-conv).
void rhs_serial(double m, double lambda, std::span<const double> u, std::span<const double> conv,
                std::span<double> out);
void rhs_parallel(double m, double lambda, std::span<const double> u, std::span<const double> conv,
                  std::span<double> out);

/// out = a + s * b.
void axpy_parallel(std::span<const double> a, double s, std::span<const double> b, std::span<double> out);

/// u += dt/6 (k1 + 2 k2 + 2 k3 + k4).
void rk4_combine_parallel(std::span<double> u, double dt, std::span<const double> k1, std::span<const double> k2,
                          std::span<const double> k3, std::span<const double> k4);

/// Largest |a - b|.
double max_abs_diff(std::span<const double> a, std::span<const double> b);

}  // namespace kernels

}  // namespace aggrokin
