#include "aggrokin/micro_experiments.hpp"

#include <omp.h>

#include <algorithm>
#include <cmath>
#include <exception>
#include <limits>

#include "aggrokin/errors.hpp"
#include "aggrokin/meso_solver.hpp"
#include "aggrokin/micro_sim.hpp"

namespace aggrokin {

namespace {

template <class F>
void parallel_replicas(int replicas, int threads, F&& body) {
  std::exception_ptr failure;
  const int nt = threads > 0 ? threads : omp_get_max_threads();
#pragma omp parallel for schedule(dynamic) num_threads(nt)
  for (int r = 0; r < replicas; ++r) {
    try {
      body(r);
    } catch (...) {
#pragma omp critical(aggrokin_replica_failure)
      if (!failure) failure = std::current_exception();
    }
  }
  if (failure) std::rethrow_exception(failure);
}

}  // namespace

CompareReport micro_meso_compare(const ModelParams& params, const Potential& p, const DensityField& u0,
                                 const CompareOptions& opts) {
  if (u0.grid.dim != 1 || p.dim() != 1)
    throw Error(ErrorKind::configuration, "micro_sim", "micro-meso comparison supports d = 1 only");
  if (opts.replicas < 64)
    throw Error(ErrorKind::configuration, "micro_sim", "micro-meso comparison needs at least 64 replicas");
  if (opts.eps_list.empty()) throw Error(ErrorKind::configuration, "micro_sim", "eps_list is empty");
  u0.grid.validate_for(p);

  const double b = beta(p);
  MolIntegrator integ(params, p, u0.grid);
  DensityField ut;
  integrate_mol(integ, u0, opts.t_end, default_dt(params, b), 0.0,
                [&](const DensityField& u, std::span<const double>) { ut = u; });

  const double L = u0.grid.L;
  CompareReport rep;
  for (double eps : opts.eps_list) {
    ModelParams pe = params;
    pe.epsilon = eps;
    pe.validate();
    ReplicaSet snaps(static_cast<std::size_t>(opts.replicas));
    std::vector<std::uint64_t> events(static_cast<std::size_t>(opts.replicas), 0);
    const double times[] = {opts.t_end};
    parallel_replicas(opts.replicas, opts.threads, [&](int r) {
      auto st = init_poisson(pe, p, u0, replica_seed(opts.seed, static_cast<std::uint64_t>(r)));
      auto res = run(st, opts.t_end, times);
      snaps[static_cast<std::size_t>(r)] = std::move(res.snapshots.at(0).points);
      events[static_cast<std::size_t>(r)] = res.events;
    });

    EpsilonResult er;
    er.epsilon = eps;
    for (auto e : events) er.events += e;
    er.density = estimate_density(snaps, eps, L, 1, opts.density_bins);
    er.pairs = estimate_pair_correlation(snaps, eps, L, 1, opts.pair_r_max, opts.pair_bins, opts.k1_bins);
    double ss = 0.0;
    for (std::size_t i = 0; i + 1 < er.density.edges.size(); ++i) {
      const double m = bin_average(ut, er.density.edges[i], er.density.edges[i + 1]);
      const double diff = er.density.k1[i] - m;
      const double se = er.density.stderr_[i];
      const double z = se > 0.0 ? std::abs(diff) / se : (diff == 0.0 ? 0.0 : std::numeric_limits<double>::infinity());
      er.meso.push_back(m);
      er.z.push_back(z);
      er.max_z = std::max(er.max_z, z);
      ss += diff * diff;
    }
    er.discrepancy = std::sqrt(ss / static_cast<double>(er.meso.size()));
    for (std::size_t i = 1; i < er.pairs.chaos_ratio.size(); ++i) {
      const double se = er.pairs.ratio_stderr[i];
      const double d = std::abs(er.pairs.chaos_ratio[i] - 1.0);
      er.max_chaos_z = std::max(er.max_chaos_z, se > 0.0 ? d / se : (d == 0.0 ? 0.0 : std::numeric_limits<double>::infinity()));
    }
    rep.runs.push_back(std::move(er));
  }

  std::vector<const EpsilonResult*> by_eps;
  for (const auto& r : rep.runs) by_eps.push_back(&r);
  std::sort(by_eps.begin(), by_eps.end(), [](auto a, auto b) { return a->epsilon > b->epsilon; });
  rep.monotone_pass = true;
  for (std::size_t i = 1; i < by_eps.size(); ++i)
    if (by_eps[i]->discrepancy > by_eps[i - 1]->discrepancy) rep.monotone_pass = false;
  const auto& smallest = *by_eps.back();
  rep.density_pass = smallest.max_z <= opts.z_tolerance;
  rep.chaos_pass = smallest.max_chaos_z <= opts.z_tolerance;
  rep.pass = rep.density_pass && rep.monotone_pass && rep.chaos_pass;
  return rep;
}

nlohmann::json CompareReport::to_json() const {
  nlohmann::json runs_j = nlohmann::json::array();
  for (const auto& r : runs) {
    runs_j.push_back({{"epsilon", r.epsilon},
                      {"density", aggrokin::to_json(r.density)},
                      {"pairs", aggrokin::to_json(r.pairs)},
                      {"meso_bin_average", r.meso},
                      {"z", r.z},
                      {"max_z", r.max_z},
                      {"discrepancy_rms", r.discrepancy},
                      {"max_chaos_z", r.max_chaos_z},
                      {"events", r.events}});
  }
  return {{"runs", runs_j},
          {"density_pass", density_pass},
          {"monotone_pass", monotone_pass},
          {"chaos_pass", chaos_pass},
          {"pass", pass}};
}

GrowthReport fluctuation_growth_demo(const ModelParams& params, const Potential& p, const RegionSupport& region,
                                     std::size_t initial_count, const GrowthOptions& opts) {
  region.validate();
  if (opts.samples < 2 || opts.replicas < 2 || !(opts.t_end > 0.0))
    throw Error(ErrorKind::configuration, "micro_sim", "growth demo needs samples >= 2, replicas >= 2, t_end > 0");
  ModelParams pe = params;
  pe.epsilon = 1.0;
  std::vector<double> times(static_cast<std::size_t>(opts.samples));
  for (int k = 0; k < opts.samples; ++k) times[static_cast<std::size_t>(k)] = opts.t_end * k / (opts.samples - 1);

  auto curve = [&](std::size_t n0, std::uint64_t seed) {
    GrowthCurve c;
    c.initial_count = n0;
    c.times = times;
    std::vector<std::vector<double>> counts(static_cast<std::size_t>(opts.replicas));
    std::vector<int> capped(static_cast<std::size_t>(opts.replicas), 0);
    parallel_replicas(opts.replicas, opts.threads, [&](int r) {
      SimState st(pe, p, opts.L, replica_seed(seed, static_cast<std::uint64_t>(r)), opts.cap);
      for (std::size_t k = 0; k < n0; ++k) {
        Point x{region.lo[0] + (region.hi[0] - region.lo[0]) * uniform01(st.rng()), 0.0};
        if (p.dim() == 2) x[1] = region.lo[1] + (region.hi[1] - region.lo[1]) * uniform01(st.rng());
        st.add_particle(x);
      }
      auto& out = counts[static_cast<std::size_t>(r)];
      RunResult res;
      try {
        res = run(st, opts.t_end, times);
      } catch (const CapacityExceeded& e) {
        res = e.partial();
        capped[static_cast<std::size_t>(r)] = 1;
      }
      for (const auto& s : res.snapshots) {
        std::size_t n = 0;
        for (const auto& x : s.points) n += region.contains(x) ? 1 : 0;
        out.push_back(static_cast<double>(n));
      }
      // A capped replica keeps its last recorded count as a lower bound.
      const double last = out.empty() ? static_cast<double>(n0) : out.back();
      while (out.size() < times.size()) out.push_back(last);
    });
    for (int v : capped) c.capped_replicas += static_cast<std::size_t>(v);
    const double R = opts.replicas;
    for (std::size_t k = 0; k < times.size(); ++k) {
      double s = 0.0, s2 = 0.0;
      for (const auto& row : counts) {
        s += row[k];
        s2 += row[k] * row[k];
      }
      const double mean = s / R;
      c.mean.push_back(mean);
      c.stderr_.push_back(std::sqrt(std::max(0.0, (s2 / R - mean * mean) * R / (R - 1.0)) / R));
    }
    return c;
  };

  GrowthReport rep;
  rep.seeded = curve(initial_count, opts.seed);
  rep.baseline = curve(0, opts.seed + 1'000'000);
  rep.seeded_grows = rep.seeded.mean.back() > static_cast<double>(initial_count);
  const auto& bm = rep.baseline.mean;
  const double q = bm[3 * (bm.size() - 1) / 4];
  rep.baseline_levels_off = bm.back() > 0.0 && std::abs(bm.back() - q) <= 0.1 * bm.back();
  return rep;
}

nlohmann::json GrowthReport::to_json() const {
  auto c = [](const GrowthCurve& g) {
    return nlohmann::json{{"initial_count", g.initial_count},
                          {"t", g.times},
                          {"mean_count", g.mean},
                          {"stderr", g.stderr_},
                          {"capped_replicas", g.capped_replicas}};
  };
  return {{"seeded", c(seeded)},
          {"baseline", c(baseline)},
          {"seeded_grows", seeded_grows},
          {"baseline_levels_off", baseline_levels_off}};
}

}  // namespace aggrokin
