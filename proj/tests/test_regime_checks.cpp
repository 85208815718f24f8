#include <gtest/gtest.h>

#include <cmath>

#include "aggrokin/errors.hpp"
#include "aggrokin/regime_checks.hpp"

using namespace aggrokin;

namespace {

const ModelParams params{1.0, 0.25, 1.0};
const Potential phi = Potential::indicator_box(0.5, 1.0);
const DomainGrid grid{1, 16.0, 128};

DensityField bump(double base, double height, double width) {
  DensityField u(grid, base);
  for (std::size_t i = 0; i < grid.size(); ++i) {
    const double r = std::abs(grid.node(i)[0]);
    if (r < width) u.values[i] += height * std::pow(std::cos(M_PI * r / (2.0 * width)), 2);
  }
  return u;
}

}  // namespace

TEST(RegimeChecks, BoundedBelowKappa2) {
  const auto eq = equilibria(params, 1.0);
  const auto r = check_bounded_regime(params, phi, bump(0.0, 0.95 * eq.kappa2, 3.0), 10.0);
  EXPECT_TRUE(r.pass);
  EXPECT_LE(r.max_value, eq.kappa2 + 1e-6);
  EXPECT_FALSE(r.interval_variant);
}

TEST(RegimeChecks, InvariantIntervalVariant) {
  const auto eq = equilibria(params, 1.0);
  const auto u0 = bump(eq.kappa1, 0.5 * (eq.kappa2 - eq.kappa1), 2.0);
  const auto r = check_bounded_regime(params, phi, u0, 10.0);
  EXPECT_TRUE(r.interval_variant);
  EXPECT_TRUE(r.pass);
  EXPECT_GE(r.min_value, eq.kappa1 - 1e-6);
  EXPECT_NEAR(r.c, u0.max(), 1e-15);
}

TEST(RegimeChecks, BoundedRequiresRegulationRegime) {
  EXPECT_THROW(check_bounded_regime({1.0, 1.0, 1.0}, phi, bump(0.0, 0.1, 1.0), 1.0), Error);
}

TEST(RegimeChecks, ComparisonKeepsOrder) {
  const auto r = check_comparison(params, phi, bump(0.1, 0.5, 2.0), bump(0.2, 0.8, 3.0), 10.0);
  EXPECT_TRUE(r.pass);
  EXPECT_LE(r.max_violation, 1e-6);
  EXPECT_GT(r.reports, 10u);
  EXPECT_THROW(check_comparison(params, phi, bump(0.3, 0.5, 2.0), bump(0.2, 0.8, 3.0), 1.0), Error);
}

TEST(RegimeChecks, RandomFieldIsNormalized) {
  const auto f = random_smooth_field(grid, 42);
  double mean = 0.0, sup = 0.0;
  for (double v : f.values) {
    mean += v;
    sup = std::max(sup, std::abs(v));
  }
  EXPECT_NEAR(mean / static_cast<double>(grid.size()), 0.0, 1e-12);
  EXPECT_NEAR(sup, 1.0, 1e-12);
  EXPECT_EQ(random_smooth_field(grid, 42).values, f.values);
  EXPECT_NE(random_smooth_field(grid, 43).values, f.values);
}

TEST(RegimeChecks, StabilityDecaysAtLinearRate) {
  const auto eq = equilibria(params, 1.0);
  const auto r = check_stability(params, phi, grid, 0.05 * eq.kappa1, 1);
  EXPECT_TRUE(r.pass);
  EXPECT_TRUE(r.bounded);
  EXPECT_TRUE(r.decayed);
  EXPECT_NEAR(r.t_end, 50.0 / std::exp(-eq.kappa1), 1e-9);
  // Slowest mode: constant, rate -m e^{-beta k1}(1 - beta k1). Others decay at least as fast.
  EXPECT_NEAR(r.linearized_rate, -std::exp(-eq.kappa1) * (1.0 - eq.kappa1), 1e-14);
  EXPECT_LE(r.measured_rate, 0.9 * r.linearized_rate);
  EXPECT_THROW(check_stability(params, phi, grid, 0.5 * eq.kappa1, 1), Error);
}
