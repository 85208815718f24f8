#pragma once

#include <memory>
#include <span>

#include "aggrokin/grid.hpp"
#include "aggrokin/kernels.hpp"
#include "aggrokin/potential.hpp"

namespace aggrokin {

enum class ConvolutionMethod { fft, direct_serial, direct_parallel };

/// Cell-integrated kernel weights for `grid`; the weights sum to beta up to
/// quadrature error (exactly for indicator kernels).
Stencil make_stencil(const Potential& p, const DomainGrid& grid);

/// Periodic convolution phi * u on a fixed grid. Holds FFT plans and scratch
/// buffers, so one instance must not be shared between threads.
class Convolver {
 public:
  Convolver(const Potential& p, const DomainGrid& grid, ConvolutionMethod method = ConvolutionMethod::fft);
  ~Convolver();
  Convolver(Convolver&&) noexcept;
  Convolver& operator=(Convolver&&) noexcept;
  Convolver(const Convolver&) = delete;
  Convolver& operator=(const Convolver&) = delete;

  void apply(std::span<const double> u, std::span<double> out);

  const DomainGrid& grid() const noexcept { return grid_; }
  const Stencil& stencil() const noexcept { return stencil_; }
  ConvolutionMethod method() const noexcept { return method_; }
  /// Discrete kernel mass (the grid's beta).
  double mass() const noexcept { return mass_; }

 private:
  struct FftState;

  DomainGrid grid_;
  ConvolutionMethod method_;
  Stencil stencil_;
  double mass_ = 0.0;
  std::unique_ptr<FftState> fft_;
};

DensityField convolve(const Potential& p, const DensityField& u, ConvolutionMethod method = ConvolutionMethod::fft);

}  // namespace aggrokin
