#include <gtest/gtest.h>

#include <cmath>
#include <numeric>
#include <random>

#include "aggrokin/errors.hpp"
#include "aggrokin/micro_sim.hpp"
#include "aggrokin/particles.hpp"
#include "aggrokin/rng.hpp"

using namespace aggrokin;

namespace {

double min_image(double a, double b, double L) {
  double d = a - b;
  d -= L * std::round(d / L);
  return d;
}

// O(N^2) energy with an explicit minimum-image kernel.
double brute_energy(const std::vector<Point>& pts, std::size_t i, const Potential& p, double L) {
  double e = 0.0;
  for (std::size_t j = 0; j < pts.size(); ++j) {
    if (j == i) continue;
    if (p.dim() == 1)
      e += p(min_image(pts[i][0], pts[j][0], L));
    else
      e += p(min_image(pts[i][0], pts[j][0], L), min_image(pts[i][1], pts[j][1], L));
  }
  return e;
}

}  // namespace

TEST(Fenwick, MatchesLinearScan) {
  std::mt19937_64 rng(1);
  std::uniform_real_distribution<double> U(0.0, 3.0);
  FenwickTree t;
  t.resize(37);
  std::vector<double> w(37);
  for (std::size_t i = 0; i < w.size(); ++i) t.set(i, w[i] = U(rng));
  w[5] = 0.0;
  t.set(5, 0.0);
  const double total = std::accumulate(w.begin(), w.end(), 0.0);
  EXPECT_NEAR(t.total(), total, 1e-12);
  for (int k = 0; k < 500; ++k) {
    const double target = U(rng) / 3.0 * total;
    std::size_t expect = 0;
    double acc = w[0];
    while (acc <= target && expect + 1 < w.size()) acc += w[++expect];
    EXPECT_EQ(t.find(target), expect);
    EXPECT_NE(t.find(target), 5u);
  }
  t.rebuild();
  EXPECT_NEAR(t.total(), total, 1e-12);
  EXPECT_EQ(t.find(10 * total), w.size() - 1);
}

TEST(Particles, CachedEnergiesMatchBruteForce) {
  for (int dim : {1, 2}) {
    const auto p = dim == 1 ? Potential::triangle(0.6, 1.0) : Potential::indicator_box(0.5, 1.0, 2);
    const double L = 6.0;
    ParticleConfiguration cfg(p, L);
    std::mt19937_64 rng(7);
    std::uniform_real_distribution<double> U(-L, L);
    for (int i = 0; i < 300; ++i) cfg.add({U(rng), dim == 2 ? U(rng) : 0.0});
    for (int i = 0; i < 120; ++i) cfg.remove(static_cast<std::size_t>(i * 7) % cfg.size());
    ASSERT_EQ(cfg.size(), 180u);
    for (const auto& x : cfg.positions()) {
      EXPECT_GE(x[0], -L / 2);
      EXPECT_LT(x[0], L / 2);
    }
    for (std::size_t i = 0; i < cfg.size(); ++i)
      EXPECT_NEAR(cfg.energy(i), brute_energy(cfg.positions(), i, p, L), 1e-10);
    EXPECT_LT(cfg.audit(), 1e-12);
    EXPECT_NEAR(cfg.energy_at(cfg.position(0), 0), cfg.energy(0), 1e-12);
  }
}

TEST(Particles, WrapAroundAndCounting) {
  const auto p = Potential::indicator_box(0.5, 1.0);
  ParticleConfiguration cfg(p, 10.0);
  cfg.add({4.9, 0.0});
  cfg.add({-4.8, 0.0});  // 0.3 away through the boundary
  cfg.add({0.0, 0.0});
  EXPECT_DOUBLE_EQ(cfg.energy(0), 1.0);
  EXPECT_DOUBLE_EQ(cfg.energy(2), 0.0);
  EXPECT_EQ(cfg.count_in(RegionSupport::interval(-1.0, 1.0)), 1u);
  const auto i = cfg.add({7.0, 0.0});  // wraps to -3
  EXPECT_NEAR(cfg.position(i)[0], -3.0, 1e-12);
  EXPECT_THROW(ParticleConfiguration(p, 0.9), Error);
}

TEST(Rng, Distributions) {
  Rng rng(123);
  double s = 0.0, sp = 0.0;
  for (int i = 0; i < 20000; ++i) {
    const double u = uniform01(rng);
    ASSERT_GE(u, 0.0);
    ASSERT_LT(u, 1.0);
    s += exponential(rng, 4.0);
    sp += static_cast<double>(poisson(rng, 3.0));
  }
  EXPECT_NEAR(s / 20000, 0.25, 0.01);
  EXPECT_NEAR(sp / 20000, 3.0, 0.05);
  EXPECT_EQ(replica_seed(10, 3), 13u);
}

TEST(MicroSim, FreeProcessHasPoissonMean) {
  // phi = 0: immigration-death, stationary count Poisson(lambda L / m).
  const ModelParams params{1.0, 2.0, 1.0};
  const auto p = Potential::zero();
  const double L = 10.0, t = 6.0;
  const int R = 200;
  double s = 0.0;
  const double times[] = {t};
  for (int r = 0; r < R; ++r) {
    SimState st(params, p, L, replica_seed(99, r));
    s += static_cast<double>(run(st, t, times).snapshots.at(0).points.size());
  }
  const double mean = 20.0 * (1.0 - std::exp(-t));
  EXPECT_NEAR(s / R, mean, 4.0 * std::sqrt(mean / R));
}

TEST(MicroSim, RatesFollowEnergy) {
  const ModelParams params{2.0, 1.0, 0.5};
  const auto p = Potential::indicator_box(0.5, 1.0);
  SimState st(params, p, 10.0, 1);
  EXPECT_DOUBLE_EQ(st.birth_rate(), 1.0 / 0.5 * 10.0);
  st.add_particle({0.0, 0.0});
  st.add_particle({0.2, 0.0});
  st.add_particle({3.0, 0.0});
  EXPECT_NEAR(st.death_rate(0), 2.0 * std::exp(-0.5), 1e-14);
  EXPECT_NEAR(st.death_rate(2), 2.0, 1e-14);
  EXPECT_NEAR(st.total_death_rate(), st.recomputed_total_death_rate(), 1e-12);
  st.remove_particle(1);
  EXPECT_NEAR(st.death_rate(0), 2.0, 1e-14);
  EXPECT_LT(st.audit(), 1e-12);
}

TEST(MicroSim, ReproducibleAndCadlag) {
  const ModelParams params{1.0, 1.0, 0.5};
  const auto p = Potential::indicator_box(0.5, 1.0);
  const DomainGrid g{1, 10.0, 64};
  const DensityField u0(g, 0.8);
  const double times[] = {0.0, 0.5, 1.0};
  auto a = init_poisson(params, p, u0, 17);
  auto b = init_poisson(params, p, u0, 17);
  const auto initial = a.config().positions();
  const auto ra = run(a, 1.0, times), rb = run(b, 1.0, times);
  ASSERT_EQ(ra.snapshots.size(), 3u);
  EXPECT_EQ(ra.snapshots[0].points, initial);
  for (std::size_t k = 0; k < 3; ++k) EXPECT_EQ(ra.snapshots[k].points, rb.snapshots[k].points);
  EXPECT_EQ(ra.events, rb.events);
  auto c = init_poisson(params, p, u0, 18);
  EXPECT_NE(run(c, 1.0, times).snapshots[2].points, ra.snapshots[2].points);
  EXPECT_DOUBLE_EQ(a.time(), 1.0);  // the overshooting event is discarded
}

TEST(MicroSim, PoissonInitialIntensity) {
  const ModelParams params{1.0, 1.0, 0.25};
  const auto p = Potential::indicator_box(0.5, 1.0);
  const double L = 10.0;
  // Intensity u0/eps with u0(x) = 1 on x < 0 and 0.2 on x >= 0.
  auto u0 = [](const Point& x) { return x[0] < 0.0 ? 1.0 : 0.2; };
  double left = 0.0, right = 0.0;
  const int R = 200;
  for (int r = 0; r < R; ++r) {
    auto st = init_poisson(params, p, L, u0, 1.0, 1000 + r);
    for (const auto& x : st.config().positions()) (x[0] < 0.0 ? left : right) += 1.0;
  }
  EXPECT_NEAR(left / R, 20.0, 4.0 * std::sqrt(20.0 / R));
  EXPECT_NEAR(right / R, 4.0, 4.0 * std::sqrt(4.0 / R));
}

TEST(MicroSim, CapacityCarriesPartialResult) {
  const ModelParams params{1.0, 5.0, 0.1};
  SimState st(params, Potential::zero(), 10.0, 3, 50);
  const double times[] = {0.0, 100.0};
  try {
    run(st, 100.0, times);
    FAIL() << "expected CapacityExceeded";
  } catch (const CapacityExceeded& e) {
    EXPECT_EQ(e.kind(), ErrorKind::capacity);
    EXPECT_EQ(e.partial().snapshots.size(), 1u);
    EXPECT_TRUE(e.partial().capacity_hit);
  }
  const DomainGrid g{1, 10.0, 64};
  EXPECT_THROW(init_poisson(params, Potential::zero(), DensityField(g, 10.0), 1, 100), Error);
}
