#include "aggrokin/meso_solver.hpp"

#include <algorithm>
#include <cmath>

#include "aggrokin/errors.hpp"

namespace aggrokin {

MolIntegrator::MolIntegrator(const ModelParams& params, const Potential& p, const DomainGrid& grid,
                             ConvolutionMethod method, bool parallel)
    : params_(params), conv_(p, grid, method), parallel_(parallel) {
  params_.validate();
  const std::size_t n = grid.size();
  conv_buf_.resize(n);
  stage_.resize(n);
  k1_.resize(n);
  k2_.resize(n);
  k3_.resize(n);
  k4_.resize(n);
}

void MolIntegrator::rhs(std::span<const double> u, std::span<double> out) {
  conv_.apply(u, conv_buf_);
  if (parallel_)
    kernels::rhs_parallel(params_.m, params_.lambda, u, conv_buf_, out);
  else
    kernels::rhs_serial(params_.m, params_.lambda, u, conv_buf_, out);
}

void MolIntegrator::step(DensityField& u, double dt) {
  if (!(dt > 0.0)) throw Error(ErrorKind::domain, "meso_solver", "time step must be positive");
  rhs(u.values, k1_);
  kernels::axpy_parallel(u.values, 0.5 * dt, k1_, stage_);
  rhs(stage_, k2_);
  kernels::axpy_parallel(u.values, 0.5 * dt, k2_, stage_);
  rhs(stage_, k3_);
  kernels::axpy_parallel(u.values, dt, k3_, stage_);
  rhs(stage_, k4_);
  kernels::rk4_combine_parallel(u.values, dt, k1_, k2_, k3_, k4_);
  u.time += dt;
  for (std::size_t i = 0; i < u.values.size(); ++i)
    if (!std::isfinite(u.values[i]))
      throw Error(ErrorKind::integration_failure, "meso_solver",
                  "non-finite density at cell " + std::to_string(i) + " (t = " + std::to_string(u.time) + ")");
}

std::vector<double> rhs(const ModelParams& params, const Potential& p, const DensityField& u) {
  MolIntegrator integ(params, p, u.grid);
  std::vector<double> out(u.values.size());
  integ.rhs(u.values, out);
  return out;
}

DensityField step_mol(const ModelParams& params, const Potential& p, const DensityField& u, double dt) {
  MolIntegrator integ(params, p, u.grid);
  DensityField next = u;
  integ.step(next, dt);
  return next;
}

double default_dt(const ModelParams& params, double beta) {
  double kappa = 1.0;
  if (beta > 0.0) {
    const auto eq = equilibria(params, beta);
    if (eq.has_roots()) kappa = eq.kappa1;
  }
  return std::min(1e-2, 0.1 / (params.m + params.lambda / kappa));
}

namespace {

struct StepPlan {
  long steps;
  double dt;
  long stride;
};

StepPlan plan_steps(double t_end, double dt, double report_every) {
  if (!(t_end > 0.0)) throw Error(ErrorKind::domain, "meso_solver", "t_end must be positive");
  if (!(dt > 0.0)) throw Error(ErrorKind::domain, "meso_solver", "dt must be positive");
  StepPlan plan;
  plan.steps = std::max(1L, static_cast<long>(std::ceil(t_end / dt - 1e-9)));
  plan.dt = t_end / static_cast<double>(plan.steps);
  plan.stride = report_every > 0.0 ? std::max(1L, std::lround(report_every / plan.dt)) : plan.steps;
  return plan;
}

}  // namespace

void integrate_mol(MolIntegrator& integrator, DensityField u, double t_end, double dt, double report_every,
                   const ReportObserver& observer, const StepObserver& on_step) {
  const auto plan = plan_steps(t_end, dt, report_every);
  const double t0 = u.time;
  std::vector<double> udot(u.values.size());
  integrator.rhs(u.values, udot);
  observer(u, udot);
  for (long s = 1; s <= plan.steps; ++s) {
    integrator.step(u, plan.dt);
    u.time = t0 + static_cast<double>(s) * plan.dt;
    if (on_step) on_step(u, integrator.last_derivative());
    if (s % plan.stride == 0 || s == plan.steps) {
      integrator.rhs(u.values, udot);
      observer(u, udot);
    }
  }
}

Trajectory solve_mol(const ModelParams& params, const Potential& p, const DensityField& u0, double t_end, double dt,
                     double report_every) {
  MolIntegrator integ(params, p, u0.grid);
  Trajectory traj;
  traj.min_value = u0.min();
  integrate_mol(
      integ, u0, t_end, dt, report_every,
      [&](const DensityField& u, std::span<const double> udot) {
        traj.snapshots.push_back(u);
        traj.derivatives.emplace_back(udot.begin(), udot.end());
      },
      [&](const DensityField& u, std::span<const double>) { traj.min_value = std::min(traj.min_value, u.min()); });
  traj.positivity_ok = traj.min_value >= -traj.positivity_tolerance;
  return traj;
}

}  // namespace aggrokin
