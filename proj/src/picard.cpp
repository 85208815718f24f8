#include "aggrokin/picard.hpp"

#include <algorithm>
#include <cmath>

#include "aggrokin/errors.hpp"
#include "aggrokin/kernels.hpp"

namespace aggrokin {

namespace {

constexpr std::size_t min_time_nodes = 16;

/// (1 - e^{-z}) / z, stable near 0.
double one_minus_exp_over(double z) { return z < 1e-8 ? 1.0 - 0.5 * z : -std::expm1(-z) / z; }

}  // namespace

TimeField TimeField::constant(const DomainGrid& grid, std::span<const double> v, double t0, double T, int intervals) {
  TimeField f;
  f.grid = grid;
  for (int k = 0; k <= intervals; ++k) {
    f.times.push_back(t0 + T * k / intervals);
    f.values.emplace_back(v.begin(), v.end());
  }
  return f;
}

TimeField phi_map(const ModelParams& params, Convolver& conv, const TimeField& v, std::span<const double> u0) {
  if (v.nodes() < min_time_nodes)
    throw Error(ErrorKind::resolution, "meso_solver",
                "Phi-map needs at least 16 time nodes, got " + std::to_string(v.nodes()));
  const std::size_t n = v.grid.size();

  TimeField out;
  out.grid = v.grid;
  out.times = v.times;
  out.values.resize(v.nodes(), std::vector<double>(n));

  std::vector<double> conv_buf(n), g_prev(n), g_cur(n), G(n, 0.0), I(n, 0.0);
  conv.apply(v.values[0], conv_buf);
  for (std::size_t i = 0; i < n; ++i) g_prev[i] = params.m * std::exp(-conv_buf[i]);
  for (std::size_t i = 0; i < n; ++i) out.values[0][i] = u0[i];

  for (std::size_t k = 1; k < v.nodes(); ++k) {
    const double dt = v.times[k] - v.times[k - 1];
    conv.apply(v.values[k], conv_buf);
    for (std::size_t i = 0; i < n; ++i) {
      g_cur[i] = params.m * std::exp(-conv_buf[i]);
      const double z = 0.5 * dt * (g_prev[i] + g_cur[i]);
      G[i] += z;
      I[i] = std::exp(-z) * I[i] + dt * one_minus_exp_over(z);
      out.values[k][i] = std::exp(-G[i]) * u0[i] + params.lambda * I[i];
    }
    std::swap(g_prev, g_cur);
  }
  return out;
}

TimeField phi_map(const ModelParams& params, const Potential& p, const TimeField& v, const DensityField& u0) {
  Convolver conv(p, v.grid);
  return phi_map(params, conv, v, u0.values);
}

double picard_window(const ModelParams& params, double beta, double c) {
  const double a = 0.5 * params.lambda * beta * params.m;
  const double b = c * beta * params.m;
  if (a <= 0.0) throw Error(ErrorKind::domain, "meso_solver", "Picard window needs beta > 0");
  // a T^2 + b T - 1/2 = 0, positive root in a cancellation-free form.
  return 1.0 / (b + std::sqrt(b * b + 2.0 * a));
}

PicardResult solve_picard(const ModelParams& params, const Potential& p, const DensityField& u0, double c, double tol,
                          double horizon, int nodes_per_window) {
  params.validate();
  if (!(tol > 0.0)) throw Error(ErrorKind::configuration, "meso_solver", "Picard tolerance must be positive");
  if (!(horizon > 0.0)) throw Error(ErrorKind::configuration, "meso_solver", "Picard horizon must be positive");
  const double b = beta(p);
  Convolver conv(p, u0.grid);
  const double bgrid = std::max(b, conv.mass());
  const auto eq = equilibria(params, b);
  if (!eq.has_roots())
    throw Error(ErrorKind::configuration, "meso_solver", "Picard solver needs a subcritical or critical regime");
  const double slack = 1e-12 * std::max(1.0, eq.kappa2);
  if (c < eq.kappa1 - slack || c > eq.kappa2 + slack)
    throw Error(ErrorKind::configuration, "meso_solver", "bound c must lie in [kappa1, kappa2]");
  if (u0.min() < -slack || u0.max() > c + slack)
    throw Error(ErrorKind::configuration, "meso_solver", "initial data must satisfy 0 <= u0 <= c");

  PicardResult result;
  result.window = picard_window(params, bgrid, c);
  result.solution.grid = u0.grid;

  std::vector<double> start = u0.values;
  double t0 = u0.time;
  const double t_stop = u0.time + horizon;
  while (t0 < t_stop - 1e-12 * horizon) {
    const double T = std::min(result.window, t_stop - t0);
    TimeField v = TimeField::constant(u0.grid, start, t0, T, nodes_per_window);
    double prev_change = 0.0;
    double worst = 0.0;
    int sweeps = 0;
    for (;; ++sweeps) {
      if (sweeps >= 500)
        throw Error(ErrorKind::contraction_failure, "meso_solver", "Picard iteration did not converge in 500 sweeps");
      TimeField next = phi_map(params, conv, v, start);
      double change = 0.0, scale = 1.0;
      for (std::size_t k = 0; k < v.nodes(); ++k) {
        change = std::max(change, kernels::max_abs_diff(next.values[k], v.values[k]));
        for (double x : next.values[k]) scale = std::max(scale, std::abs(x));
      }
      if (result.iterations.empty() && sweeps == 0) result.first_change = change;
      // Ratios are only meaningful while the change is well above rounding.
      if (sweeps > 0 && prev_change > 1e-9 * scale) {
        const double ratio = change / prev_change;
        worst = std::max(worst, ratio);
        if (ratio >= 1.0)
          throw Error(ErrorKind::contraction_failure, "meso_solver",
                      "measured contraction ratio " + std::to_string(ratio) + " >= 1 in window starting at t = " +
                          std::to_string(t0));
      }
      v = std::move(next);
      prev_change = change;
      if (change < tol) break;
    }
    result.iterations.push_back(sweeps + 1);
    result.window_ratios.push_back(worst);
    result.worst_ratio = std::max(result.worst_ratio, worst);

    const std::size_t first = result.solution.times.empty() ? 0 : 1;
    for (std::size_t k = first; k < v.nodes(); ++k) {
      result.solution.times.push_back(v.times[k]);
      result.solution.values.push_back(v.values[k]);
    }
    start = v.values.back();
    t0 = v.times.back();
  }
  return result;
}

}  // namespace aggrokin
