#include "aggrokin/front.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "aggrokin/errors.hpp"
#include "aggrokin/io.hpp"
#include "aggrokin/meso_solver.hpp"

namespace aggrokin {

namespace {

constexpr double nan = std::numeric_limits<double>::quiet_NaN();

[[noreturn]] void config_error(const std::string& what) {
  throw Error(ErrorKind::configuration, "meso_solver", what);
}

struct Sampler {
  const DomainGrid& grid;
  double y;

  double at(std::span<const double> v, double x) const {
    if (grid.dim == 2) return v[grid.nearest(Point{x, y})];
    double s = (x + 0.5 * grid.L) / grid.pitch();
    s -= grid.n * std::floor(s / grid.n);
    const int i0 = static_cast<int>(std::floor(s)) % grid.n;
    const double w = s - std::floor(s);
    return (1.0 - w) * v[i0] + w * v[(i0 + 1) % grid.n];
  }
};

}  // namespace

FrontTrace front_trace(const ModelParams& params, const Potential& p, const DensityField& u0,
                       const AggregationCertificate& cert, const std::vector<double>& probes, double t_end,
                       const FrontOptions& opts) {
  if (!cert.valid) {
    std::string why;
    for (const auto& v : cert.violations) why += (why.empty() ? "" : "; ") + v;
    config_error("aggregation certificate is invalid: " + why);
  }
  if (!(t_end > 0.0)) config_error("front trace needs t_end > 0");
  const auto& grid = u0.grid;
  const double b = cert.b, kappa = cert.kappa, lam = params.lambda;

  std::vector<std::size_t> on_A;
  for (std::size_t i = 0; i < grid.size(); ++i)
    if (cert.region.contains(grid.node(i))) on_A.push_back(i);
  if (on_A.empty()) config_error("certificate region contains no grid node");
  for (std::size_t i : on_A) {
    const double u = u0.values[i];
    if (!(u > b && u < kappa * b))
      config_error("initial data violates b < u0 < kappa b on A at cell " + std::to_string(i) + " (u0 = " +
                   io::fmt(u) + ", b = " + io::fmt(b) + ", kappa b = " + io::fmt(kappa * b) + ")");
  }

  FrontTrace tr;
  tr.probes = probes;
  tr.threshold = b;
  tr.v = cert.v;
  tr.t_level.assign(probes.size(), nan);
  tr.t_speed.assign(probes.size(), nan);
  tr.udot_min_A = std::numeric_limits<double>::infinity();
  tr.udot_max_A = -std::numeric_limits<double>::infinity();
  tr.gr_lower_margin = tr.gr_upper_margin = tr.gr_worst_scaled = std::numeric_limits<double>::infinity();

  const Sampler sample{grid, grid.dim == 2 ? 0.5 * (cert.region.lo[1] + cert.region.hi[1]) : 0.0};
  MolIntegrator integ(params, p, grid);
  const double dt0 = opts.dt > 0.0 ? opts.dt : default_dt(params, beta(p));
  const long steps = std::max(1L, static_cast<long>(std::ceil(t_end / dt0 - 1e-9)));
  const double dt = t_end / static_cast<double>(steps);
  const long stride = std::max(1L, std::lround(opts.report_every / dt));

  DensityField u = u0;
  u.time = 0.0;
  std::vector<double> prev(probes.size()), udot(grid.size());
  std::vector<double> speed_candidate(probes.size(), nan);
  for (std::size_t k = 0; k < probes.size(); ++k) {
    prev[k] = sample.at(u.values, probes[k]);
    if (prev[k] >= b) tr.t_level[k] = 0.0;
  }

  auto report = [&] {
    integ.rhs(u.values, udot);
    const double t = u.time;
    for (std::size_t i : on_A) {
      tr.udot_min_A = std::min(tr.udot_min_A, udot[i]);
      tr.udot_max_A = std::max(tr.udot_max_A, udot[i]);
      const double lo = u.values[i] - (b + lam * t / kappa);
      const double hi = kappa * b + lam * t - u.values[i];
      tr.gr_lower_margin = std::min(tr.gr_lower_margin, lo);
      tr.gr_upper_margin = std::min(tr.gr_upper_margin, hi);
      tr.gr_worst_scaled = std::min(tr.gr_worst_scaled, std::min(lo, hi) / (1.0 + lam * t));
    }
    tr.samples_A += on_A.size();
    for (std::size_t k = 0; k < probes.size(); ++k) {
      if (!std::isnan(tr.t_speed[k])) continue;
      if (sample.at(udot, probes[k]) >= cert.v) {
        if (std::isnan(speed_candidate[k]))
          speed_candidate[k] = t;
        else
          tr.t_speed[k] = speed_candidate[k];
      } else {
        speed_candidate[k] = nan;
      }
    }
    // Front extent along the first axis, measured from the origin.
    double extent = 0.0;
    for (std::size_t i = 0; i < grid.size(); ++i)
      if (u.values[i] >= b) extent = std::max(extent, std::abs(grid.node(i)[0]));
    if (extent > grid.L / 4.0) tr.wrap_guard_hit = true;
  };

  report();
  for (long s = 1; s <= steps; ++s) {
    integ.step(u, dt);
    u.time = static_cast<double>(s) * dt;
    bool all_crossed = true;
    for (std::size_t k = 0; k < probes.size(); ++k) {
      const double now = sample.at(u.values, probes[k]);
      if (std::isnan(tr.t_level[k]) && now >= b) {
        const double w = now > prev[k] ? (b - prev[k]) / (now - prev[k]) : 1.0;
        tr.t_level[k] = u.time - dt + std::clamp(w, 0.0, 1.0) * dt;
      }
      prev[k] = now;
      all_crossed = all_crossed && !std::isnan(tr.t_level[k]);
    }
    if (s % stride == 0 || s == steps) {
      report();
      if (tr.wrap_guard_hit && opts.stop_at_wrap_guard) break;
      if (opts.stop_when_crossed && all_crossed && !probes.empty()) {
        bool speeds = std::none_of(tr.t_speed.begin(), tr.t_speed.end(), [](double t) { return std::isnan(t); });
        if (speeds) break;
      }
    }
  }
  tr.t_end = u.time;
  return tr;
}

void FrontTrace::write_csv(const std::filesystem::path& path) const {
  io::CsvWriter w(path, {"x", "t_level", "t_speed"});
  for (std::size_t k = 0; k < probes.size(); ++k) w.row({probes[k], t_level[k], t_speed[k]});
}

nlohmann::json FrontTrace::to_json() const {
  auto arr = [](const std::vector<double>& v) {
    nlohmann::json a = nlohmann::json::array();
    for (double x : v) a.push_back(std::isnan(x) ? nlohmann::json(nullptr) : nlohmann::json(x));
    return a;
  };
  return {{"probes", probes},
          {"t_level", arr(t_level)},
          {"t_speed", arr(t_speed)},
          {"threshold", threshold},
          {"v", v},
          {"t_end", t_end},
          {"wrap_guard_hit", wrap_guard_hit},
          {"udot_min_A", udot_min_A},
          {"udot_max_A", udot_max_A},
          {"gr_lower_margin", gr_lower_margin},
          {"gr_upper_margin", gr_upper_margin},
          {"gr_worst_scaled", gr_worst_scaled},
          {"samples_A", samples_A}};
}

}  // namespace aggrokin
