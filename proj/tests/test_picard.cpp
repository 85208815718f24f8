#include <gtest/gtest.h>

#include <cmath>

#include "aggrokin/errors.hpp"
#include "aggrokin/experiments.hpp"
#include "aggrokin/picard.hpp"

using namespace aggrokin;

TEST(Picard, WindowSolvesQuadratic) {
  const ModelParams p{1.5, 0.2, 1.0};
  const double beta = 0.8, c = 0.9;
  const double T = picard_window(p, beta, c);
  // Positive root of (lambda beta m / 2) T^2 + (c beta m) T - 1/2 = 0.
  const double qa = 0.2 * beta * 1.5 / 2.0, qb = c * beta * 1.5;
  EXPECT_NEAR(T, (-qb + std::sqrt(qb * qb + 2.0 * qa)) / (2.0 * qa), 1e-14);
  EXPECT_NEAR(qa * T * T + qb * T, 0.5, 1e-14);
}

TEST(Picard, PhiMapExactForConstantInput) {
  // v = const gives G_t = m e^{-beta v} t, so Phi v is the linear-ODE solution.
  const ModelParams params{1.2, 0.3, 1.0};
  const auto p = Potential::indicator_box(0.5, 1.0);
  const DomainGrid g{1, 8.0, 64};
  const double v0 = 0.4, u0 = 0.25;
  const std::vector<double> vc(g.size(), v0);
  const auto v = TimeField::constant(g, vc, 0.0, 0.5, 16);
  const auto out = phi_map(params, p, v, DensityField(g, u0));
  const double r = 1.2 * std::exp(-beta(p) * v0);
  for (std::size_t k = 0; k < out.nodes(); ++k) {
    const double t = out.times[k];
    const double exact = std::exp(-r * t) * u0 + 0.3 * (1.0 - std::exp(-r * t)) / r;
    EXPECT_NEAR(out.values[k][7], exact, 1e-13);
  }
}

TEST(Picard, ConvergesToMolSolution) {
  const ModelParams params{1.0, 0.2, 1.0};
  const auto p = Potential::triangle(1.0, 1.0);
  const DomainGrid g{1, 16.0, 128};
  DensityField u0(g);
  for (std::size_t i = 0; i < g.size(); ++i) u0.values[i] = 0.3 + 0.2 * std::cos(2.0 * M_PI * g.node(i)[0] / 16.0);
  const double c = std::max(u0.max(), equilibria(params, beta(p)).kappa1);
  const auto res = solve_picard(params, p, u0, c, 1e-11, 1.0, 128);
  EXPECT_NEAR(res.solution.times.back(), 1.0, 1e-12);
  EXPECT_LE(res.worst_ratio, 0.6);
  EXPECT_LT(picard_mol_difference(params, p, u0, res), 1e-4);
}

TEST(Picard, RejectsBadBound) {
  const ModelParams params{1.0, 0.2, 1.0};
  const auto p = Potential::indicator_box(0.5, 1.0);
  const DomainGrid g{1, 8.0, 64};
  EXPECT_THROW(solve_picard(params, p, DensityField(g, 0.5), 100.0, 1e-10, 1.0), Error);  // c > kappa2
  EXPECT_THROW(solve_picard(params, p, DensityField(g, 0.9), 0.5, 1e-10, 1.0), Error);    // u0 > c
  EXPECT_THROW(solve_picard({1.0, 2.0, 1.0}, p, DensityField(g, 0.1), 0.5, 1e-10, 1.0), Error);
}
