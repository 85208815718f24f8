#pragma once

#include <functional>
#include <span>
#include <vector>

#include "aggrokin/convolution.hpp"
#include "aggrokin/equilibria.hpp"
#include "aggrokin/grid.hpp"

namespace aggrokin {

/// Right-hand side of du/dt = lambda - m u exp(-(phi * u)) on a grid, and a
/// classical RK4 stepper for the method-of-lines system.
class MolIntegrator {
 public:
  MolIntegrator(const ModelParams& params, const Potential& p, const DomainGrid& grid,
                ConvolutionMethod method = ConvolutionMethod::fft, bool parallel = true);

  void rhs(std::span<const double> u, std::span<double> out);
  /// One RK4 step; positivity is monitored by callers, not enforced.
  void step(DensityField& u, double dt);
  /// du/dt at the state the last `step` started from.
  std::span<const double> last_derivative() const noexcept { return k1_; }

  const ModelParams& params() const noexcept { return params_; }
  const DomainGrid& grid() const noexcept { return conv_.grid(); }
  Convolver& convolver() noexcept { return conv_; }

 private:
  ModelParams params_;
  Convolver conv_;
  bool parallel_;
  std::vector<double> conv_buf_, stage_, k1_, k2_, k3_, k4_;
};

std::vector<double> rhs(const ModelParams& params, const Potential& p, const DensityField& u);
DensityField step_mol(const ModelParams& params, const Potential& p, const DensityField& u, double dt);

/// dt = min(1e-2, 0.1 / (m + lambda/kappa1)), with kappa1 replaced by 1 when
/// no equilibrium exists.
double default_dt(const ModelParams& params, double beta);

struct Trajectory {
  std::vector<DensityField> snapshots;
  std::vector<std::vector<double>> derivatives;
  double min_value = 0.0;
  double positivity_tolerance = 1e-8;
  bool positivity_ok = true;
};

/// Integrates to t_end, storing snapshots every `report_every` (rounded to a
/// whole number of steps) including t = 0 and t = t_end. dt is shrunk so that
/// t_end is hit exactly.
Trajectory solve_mol(const ModelParams& params, const Potential& p, const DensityField& u0, double t_end, double dt,
                     double report_every);

/// Same stepping, but hands each report to `observer` instead of storing it.
/// `on_step`, when set, sees the state after every step together with the
/// derivative at the state the step started from.
using ReportObserver = std::function<void(const DensityField& u, std::span<const double> udot)>;
using StepObserver = std::function<void(const DensityField& u, std::span<const double> udot_before)>;
void integrate_mol(MolIntegrator& integrator, DensityField u, double t_end, double dt, double report_every,
                   const ReportObserver& observer, const StepObserver& on_step = {});

}  // namespace aggrokin
