#include "aggrokin/convolution.hpp"

#include <fftw3.h>

#include <algorithm>
#include <cmath>
#include <complex>
#include <mutex>

#include "aggrokin/errors.hpp"

namespace aggrokin {

namespace {

std::mutex& planner_mutex() {
  static std::mutex m;
  return m;
}

double overlap(double a0, double a1, double b0, double b1) {
  return std::max(0.0, std::min(a1, b1) - std::max(a0, b0));
}

double cell_mass_1d(const Potential& p, double lo, double hi) {
  const double cut = p.cutoff_radius();
  lo = std::max(lo, -cut);
  hi = std::min(hi, cut);
  if (hi <= lo) return 0.0;
  if (p.kind() == KernelKind::indicator_box) return p.amplitude() * overlap(lo, hi, -p.shape_length(), p.shape_length());
  std::vector<double> breaks{0.0};
  for (double r : p.breakpoints()) {
    breaks.push_back(r);
    breaks.push_back(-r);
  }
  auto f = [&](double y) { return p(y); };
  return quadrature::simpson_split(f, lo, hi, breaks, 32);
}

double cell_mass_2d(const Potential& p, double x0, double x1, double y0, double y1) {
  if (p.kind() == KernelKind::indicator_box) {
    const double h = p.shape_length();
    return p.amplitude() * overlap(x0, x1, -h, h) * overlap(y0, y1, -h, h);
  }
  constexpr int panels = 16;
  auto row = [&](double x) {
    auto g = [&](double y) { return p(x, y); };
    return quadrature::simpson(g, y0, y1, panels);
  };
  return quadrature::simpson(row, x0, x1, panels);
}

}  // namespace

Stencil make_stencil(const Potential& p, const DomainGrid& grid) {
  grid.validate_for(p);
  Stencil s;
  s.dim = grid.dim;
  s.n = grid.n;
  if (p.is_zero()) return s;
  const double h = grid.pitch();
  const int reach = std::min(static_cast<int>(std::ceil(p.cutoff_radius() / h)) + 1, grid.n / 2 - 1);
  if (grid.dim == 1) {
    for (int j = -reach; j <= reach; ++j) {
      const double w = cell_mass_1d(p, (j - 0.5) * h, (j + 0.5) * h);
      if (w != 0.0) {
        s.di.push_back(j);
        s.dj.push_back(0);
        s.w.push_back(w);
      }
    }
  } else {
    for (int i = -reach; i <= reach; ++i)
      for (int j = -reach; j <= reach; ++j) {
        const double w = cell_mass_2d(p, (i - 0.5) * h, (i + 0.5) * h, (j - 0.5) * h, (j + 0.5) * h);
        if (w != 0.0) {
          s.di.push_back(i);
          s.dj.push_back(j);
          s.w.push_back(w);
        }
      }
  }
  return s;
}

struct Convolver::FftState {
  int n_real = 0;
  int n_complex = 0;
  double* real = nullptr;
  fftw_complex* spectrum = nullptr;
  std::vector<std::complex<double>> kernel_hat;
  fftw_plan forward = nullptr;
  fftw_plan backward = nullptr;

  FftState(const DomainGrid& grid, const Stencil& s) {
    const int n = grid.n;
    n_real = static_cast<int>(grid.size());
    n_complex = grid.dim == 1 ? n / 2 + 1 : n * (n / 2 + 1);
    real = fftw_alloc_real(static_cast<std::size_t>(n_real));
    spectrum = fftw_alloc_complex(static_cast<std::size_t>(n_complex));
    {
      std::lock_guard lock(planner_mutex());
      if (grid.dim == 1) {
        forward = fftw_plan_dft_r2c_1d(n, real, spectrum, FFTW_ESTIMATE);
        backward = fftw_plan_dft_c2r_1d(n, spectrum, real, FFTW_ESTIMATE);
      } else {
        forward = fftw_plan_dft_r2c_2d(n, n, real, spectrum, FFTW_ESTIMATE);
        backward = fftw_plan_dft_c2r_2d(n, n, spectrum, real, FFTW_ESTIMATE);
      }
    }
    std::fill(real, real + n_real, 0.0);
    auto wrap = [n](int i) { return ((i % n) + n) % n; };
    for (std::size_t k = 0; k < s.size(); ++k) {
      const std::size_t idx = grid.dim == 1 ? static_cast<std::size_t>(wrap(s.di[k]))
                                            : static_cast<std::size_t>(wrap(s.di[k])) * n + wrap(s.dj[k]);
      real[idx] += s.w[k];
    }
    fftw_execute(forward);
    kernel_hat.resize(static_cast<std::size_t>(n_complex));
    const double scale = 1.0 / n_real;
    for (int k = 0; k < n_complex; ++k) kernel_hat[k] = std::complex<double>(spectrum[k][0], spectrum[k][1]) * scale;
  }

  ~FftState() {
    std::lock_guard lock(planner_mutex());
    fftw_destroy_plan(forward);
    fftw_destroy_plan(backward);
    fftw_free(real);
    fftw_free(spectrum);
  }

  void apply(std::span<const double> u, std::span<double> out) {
    std::copy(u.begin(), u.end(), real);
    fftw_execute(forward);
    for (int k = 0; k < n_complex; ++k) {
      const std::complex<double> z = std::complex<double>(spectrum[k][0], spectrum[k][1]) * kernel_hat[k];
      spectrum[k][0] = z.real();
      spectrum[k][1] = z.imag();
    }
    fftw_execute(backward);
    std::copy(real, real + n_real, out.begin());
  }
};

Convolver::Convolver(const Potential& p, const DomainGrid& grid, ConvolutionMethod method)
    : grid_(grid), method_(method), stencil_(make_stencil(p, grid)) {
  mass_ = stencil_.mass();
  if (method_ == ConvolutionMethod::fft) fft_ = std::make_unique<FftState>(grid_, stencil_);
}

Convolver::~Convolver() = default;
Convolver::Convolver(Convolver&&) noexcept = default;
Convolver& Convolver::operator=(Convolver&&) noexcept = default;

void Convolver::apply(std::span<const double> u, std::span<double> out) {
  if (u.size() != grid_.size() || out.size() != grid_.size())
    throw Error(ErrorKind::domain, "potential", "convolution buffers do not match the grid");
  if (stencil_.size() == 0) {
    std::fill(out.begin(), out.end(), 0.0);
    return;
  }
  switch (method_) {
    case ConvolutionMethod::fft: fft_->apply(u, out); break;
    case ConvolutionMethod::direct_serial: kernels::convolve_direct_serial(stencil_, u, out); break;
    case ConvolutionMethod::direct_parallel: kernels::convolve_direct_parallel(stencil_, u, out); break;
  }
}

DensityField convolve(const Potential& p, const DensityField& u, ConvolutionMethod method) {
  Convolver conv(p, u.grid, method);
  DensityField out(u.grid, 0.0, u.time);
  conv.apply(u.values, out.values);
  return out;
}

}  // namespace aggrokin
