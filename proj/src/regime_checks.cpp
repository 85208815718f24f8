#include "aggrokin/regime_checks.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>

#include "aggrokin/errors.hpp"
#include "aggrokin/meso_solver.hpp"

namespace aggrokin {

namespace {

constexpr double report_interval = 0.1;

[[noreturn]] void config_error(const std::string& what) {
  throw Error(ErrorKind::configuration, "meso_solver", what);
}

EquilibriumPair require_equilibria(const ModelParams& params, double b) {
  const auto eq = equilibria(params, b);
  if (!eq.has_roots()) config_error("regulation-regime checks need lambda <= m/(beta e)");
  return eq;
}

}  // namespace

BoundedReport check_bounded_regime(const ModelParams& params, const Potential& p, const DensityField& u0,
                                   double t_end, double dt) {
  const double b = beta(p);
  const auto eq = require_equilibria(params, b);
  const double slack = 1e-12 * std::max(1.0, eq.kappa2);
  if (u0.min() < -slack || u0.max() > eq.kappa2 + slack) config_error("initial data must satisfy 0 <= u0 <= kappa2");

  BoundedReport r;
  r.kappa1 = eq.kappa1;
  r.kappa2 = eq.kappa2;
  r.interval_variant = u0.min() >= eq.kappa1 - slack;
  r.c = std::max(u0.max(), eq.kappa1);
  r.max_value = u0.max();
  r.min_value = u0.min();

  MolIntegrator integ(params, p, u0.grid);
  auto track = [&](const DensityField& u, std::span<const double>) {
    r.max_value = std::max(r.max_value, u.max());
    r.min_value = std::min(r.min_value, u.min());
  };
  integrate_mol(integ, u0, t_end, dt > 0.0 ? dt : default_dt(params, b), report_interval, track, track);

  r.pass = r.max_value <= eq.kappa2 + r.tolerance && r.min_value >= -1e-8;
  if (r.interval_variant)
    r.pass = r.pass && r.min_value >= eq.kappa1 - r.tolerance && r.max_value <= r.c + r.tolerance;
  return r;
}

ComparisonReport check_comparison(const ModelParams& params, const Potential& p, const DensityField& low,
                                  const DensityField& high, double t_end, double dt) {
  const double b = beta(p);
  const auto eq = require_equilibria(params, b);
  const double slack = 1e-12 * std::max(1.0, eq.kappa2);
  if (low.values.size() != high.values.size()) config_error("comparison fields live on different grids");
  for (std::size_t i = 0; i < low.values.size(); ++i)
    if (low.values[i] < -slack || low.values[i] > high.values[i] + slack || high.values[i] > eq.kappa2 + slack)
      config_error("comparison needs 0 <= u0_low <= u0_high <= kappa2 pointwise (cell " + std::to_string(i) + ")");

  // Both runs share the step plan, so reports line up one to one.
  const double step = dt > 0.0 ? dt : default_dt(params, b);
  std::vector<DensityField> lows;
  MolIntegrator integ_low(params, p, low.grid);
  integrate_mol(integ_low, low, t_end, step, report_interval,
                [&](const DensityField& u, std::span<const double>) { lows.push_back(u); });

  ComparisonReport r;
  r.max_violation = -std::numeric_limits<double>::infinity();
  MolIntegrator integ_high(params, p, high.grid);
  integrate_mol(integ_high, high, t_end, step, report_interval, [&](const DensityField& u, std::span<const double>) {
    const auto& l = lows.at(r.reports++);
    for (std::size_t i = 0; i < u.values.size(); ++i) r.max_violation = std::max(r.max_violation, l.values[i] - u.values[i]);
  });
  r.pass = r.reports == lows.size() && r.max_violation <= r.tolerance;
  return r;
}

DensityField random_smooth_field(const DomainGrid& grid, std::uint64_t seed, int modes) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> amp(-1.0, 1.0), phase(0.0, 2.0 * std::numbers::pi);
  DensityField f(grid);
  const double kbase = 2.0 * std::numbers::pi / grid.L;
  for (int k = 1; k <= modes; ++k) {
    const double a = amp(rng), ph = phase(rng);
    const int ky = grid.dim == 2 ? static_cast<int>(rng() % 3) : 0;
    const double ph2 = phase(rng);
    for (std::size_t idx = 0; idx < grid.size(); ++idx) {
      const Point x = grid.node(idx);
      double v = a * std::cos(kbase * k * x[0] + ph);
      if (grid.dim == 2) v *= std::cos(kbase * ky * x[1] + ph2);
      f.values[idx] += v;
    }
  }
  double mean = 0.0;
  for (double v : f.values) mean += v;
  mean /= static_cast<double>(f.values.size());
  double sup = 0.0;
  for (double& v : f.values) {
    v -= mean;
    sup = std::max(sup, std::abs(v));
  }
  if (sup > 0.0)
    for (double& v : f.values) v /= sup;
  return f;
}

double stability_horizon(const ModelParams& params, double b) {
  const auto eq = require_equilibria(params, b);
  return 50.0 / (params.m * std::exp(-b * eq.kappa1));
}

StabilityReport check_stability_field(const ModelParams& params, const Potential& p, const DensityField& perturbation,
                                      double t_end) {
  const double b = beta(p);
  const auto eq = require_equilibria(params, b);
  if (eq.regime != Regime::subcritical) config_error("stability check needs the subcritical regime");

  StabilityReport r;
  r.kappa1 = eq.kappa1;
  r.t_end = t_end > 0.0 ? t_end : stability_horizon(params, b);
  r.linearized_rate = -params.m * std::exp(-b * eq.kappa1) * (1.0 - b * eq.kappa1);

  DensityField u0 = perturbation;
  for (double& v : u0.values) v += eq.kappa1;
  auto deviation = [&](const DensityField& u) {
    double d = 0.0;
    for (double v : u.values) d = std::max(d, std::abs(v - eq.kappa1));
    return d;
  };
  r.initial_deviation = deviation(u0);
  r.max_deviation = r.initial_deviation;
  r.history.emplace_back(0.0, r.initial_deviation);

  MolIntegrator integ(params, p, u0.grid);
  integrate_mol(
      integ, u0, r.t_end, default_dt(params, b), r.t_end / 200.0,
      [&](const DensityField& u, std::span<const double>) {
        if (u.time > 0.0) r.history.emplace_back(u.time, deviation(u));
      },
      [&](const DensityField& u, std::span<const double>) {
        const double d = deviation(u);
        r.max_deviation = std::max(r.max_deviation, d);
        r.final_deviation = d;
      });

  auto dev_at = [&](double t) {
    auto it = std::lower_bound(r.history.begin(), r.history.end(), t,
                               [](const auto& h, double x) { return h.first < x; });
    return it == r.history.end() ? r.history.back() : *it;
  };
  const auto a = dev_at(r.t_end / 8.0), c = dev_at(r.t_end / 4.0);
  if (a.second > 0.0 && c.second > 0.0 && c.first > a.first)
    r.measured_rate = std::log(c.second / a.second) / (c.first - a.first);

  if (r.initial_deviation == 0.0) {
    r.bounded = r.max_deviation == 0.0;
    r.decayed = r.final_deviation == 0.0;
  } else {
    r.bounded = r.max_deviation <= 2.0 * r.initial_deviation;
    r.decayed = r.final_deviation < 0.1 * r.initial_deviation;
  }
  r.pass = r.bounded && r.decayed;
  return r;
}

StabilityReport check_stability(const ModelParams& params, const Potential& p, const DomainGrid& grid,
                                double amplitude, std::uint64_t seed, double t_end) {
  const auto eq = require_equilibria(params, beta(p));
  if (amplitude < 0.0 || amplitude > 0.1 * eq.kappa1 * (1.0 + 1e-12))
    config_error("perturbation amplitude must lie in [0, 0.1 kappa1]");
  DensityField pert = random_smooth_field(grid, seed);
  for (double& v : pert.values) v *= amplitude;
  return check_stability_field(params, p, pert, t_end);
}

nlohmann::json to_json(const BoundedReport& r) {
  return {{"kappa1", r.kappa1},       {"kappa2", r.kappa2}, {"max_value", r.max_value},
          {"min_value", r.min_value}, {"interval_variant", r.interval_variant},
          {"c", r.c},                 {"tolerance", r.tolerance}, {"pass", r.pass}};
}

nlohmann::json to_json(const ComparisonReport& r) {
  return {{"max_violation", r.max_violation}, {"reports", r.reports}, {"tolerance", r.tolerance}, {"pass", r.pass}};
}

nlohmann::json to_json(const StabilityReport& r) {
  return {{"kappa1", r.kappa1},
          {"t_end", r.t_end},
          {"initial_deviation", r.initial_deviation},
          {"max_deviation", r.max_deviation},
          {"final_deviation", r.final_deviation},
          {"measured_rate", r.measured_rate},
          {"linearized_rate_constant_mode", r.linearized_rate},
          {"bounded", r.bounded},
          {"decayed", r.decayed},
          {"pass", r.pass}};
}

}  // namespace aggrokin
