#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "aggrokin/equilibria.hpp"
#include "aggrokin/errors.hpp"

using namespace aggrokin;

namespace {

// Bisection oracle for roots of f(u) = lambda - m u e^{-beta u} on [lo, hi].
double bisect(double m, double lambda, double beta, double lo, double hi) {
  auto f = [&](double u) { return lambda - m * u * std::exp(-beta * u); };
  const double flo = f(lo);
  for (int i = 0; i < 200; ++i) {
    const double mid = 0.5 * (lo + hi);
    ((f(mid) > 0.0) == (flo > 0.0) ? lo : hi) = mid;
  }
  return 0.5 * (lo + hi);
}

}  // namespace

TEST(Equilibria, MatchesBisectionOracle) {
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> U(0.05, 3.0), frac(0.01, 0.99);
  for (int i = 0; i < 300; ++i) {
    const double m = U(rng), beta = U(rng);
    const double lambda = frac(rng) * m / (beta * std::exp(1.0));
    const auto eq = equilibria({m, lambda, 1.0}, beta);
    ASSERT_EQ(eq.regime, Regime::subcritical);
    EXPECT_NEAR(eq.kappa1, bisect(m, lambda, beta, 0.0, 1.0 / beta), 1e-10 / beta);
    EXPECT_NEAR(eq.kappa2, bisect(m, lambda, beta, 1.0 / beta, 200.0 / beta), 1e-9 * eq.kappa2);
    EXPECT_LT(eq.kappa1, 1.0 / beta);
    EXPECT_GT(eq.kappa2, 1.0 / beta);
  }
}

TEST(Equilibria, RegimeClassification) {
  EXPECT_EQ(equilibria({1.0, std::exp(-1.0), 1.0}, 1.0).regime, Regime::critical);
  EXPECT_EQ(equilibria({1.0, 0.5, 1.0}, 1.0).regime, Regime::supercritical);
  EXPECT_FALSE(equilibria({1.0, 0.5, 1.0}, 1.0).has_roots());
  const auto crit = equilibria({1.0, std::exp(-1.0), 1.0}, 1.0);
  EXPECT_NEAR(crit.kappa1, 1.0, 1e-6);
  EXPECT_NEAR(crit.kappa2, 1.0, 1e-6);
}

TEST(Equilibria, RejectsNonPositiveBeta) {
  EXPECT_THROW(equilibria({2.0, 1.0, 1.0}, 0.0), Error);
  EXPECT_THROW(equilibria({2.0, 1.0, 1.0}, -1.0), Error);
}

TEST(Equilibria, PRootsSolveREToMinusR) {
  for (double y : {1e-6, 0.01, 0.2, 0.36}) {
    const double s = p_root_small(y), l = p_root_large(y);
    EXPECT_LE(s, 1.0);
    EXPECT_GE(l, 1.0);
    EXPECT_NEAR(s * std::exp(-s), y, 1e-13);
    EXPECT_NEAR(l * std::exp(-l), y, 1e-13);
  }
}

TEST(Equilibria, BHatAndThetaAreInverse) {
  const double lm = 1.0, phiA = 0.5;
  const double bh = b_hat(lm, phiA);
  // Oracle: larger root of b e^{-b/2} = 1/4.
  EXPECT_NEAR(bh * std::exp(-phiA * bh), 0.25, 1e-12);
  EXPECT_GT(bh, 1.0 / phiA);
  for (double f : {1.0, 1.1, 2.0, 5.0}) {
    const double b = f * bh;
    const double th = theta_of_b(lm, phiA, b);
    EXPECT_NEAR(th, b * std::exp(-phiA * b) / lm, 1e-14);
    EXPECT_NEAR(b_of_theta(lm, phiA, th), b, 1e-9 * b);
  }
  // Past the threshold b_hat saturates at 1/phi_A.
  EXPECT_NEAR(b_hat(20.0, 0.5), 2.0, 1e-14);
}

TEST(Equilibria, CertificateForSupercriticalBox) {
  const ModelParams p{1.0, 1.0, 1.0};
  const auto A = RegionSupport::interval(-1.0, 1.0);
  const double bh = b_hat(1.0, 0.5);
  const auto ok = make_certificate(p, 0.5, A, 1.1 * bh, 2.0);
  EXPECT_TRUE(ok.valid) << (ok.violations.empty() ? "" : ok.violations.front());
  EXPECT_NEAR(ok.v, 1.0 - 2.0 * 1.1 * bh * std::exp(-0.5 * 1.1 * bh), 1e-12);
  EXPECT_GT(ok.v, 0.5);
  const auto bad_kappa = make_certificate(p, 0.5, A, 1.1 * bh, 1.0);
  EXPECT_FALSE(bad_kappa.valid);
  const auto low_b = make_certificate(p, 0.5, A, 0.5 * bh, 2.0);
  EXPECT_FALSE(low_b.valid);
  EXPECT_FALSE(low_b.violations.empty());
}

TEST(Equilibria, HorizonFormula) {
  const ModelParams p{1.0, 0.7, 1.0};
  const double cphi = 0.4, beta = 0.9, C0 = 1.2, C = 3.0;
  const auto h = ovsjannikov_horizon(p, cphi, beta, C0, C);
  EXPECT_NEAR(h.T, C0 * (C - C0) / (C * C * (std::exp(C * cphi) + 0.7 / C0)), 1e-15);
  EXPECT_NEAR(h.T1, C0 * (C - C0) / (C * C * (std::exp(C * beta) + 0.7 / C0)), 1e-15);
  EXPECT_LE(h.T1, h.T);
  EXPECT_THROW(ovsjannikov_horizon(p, cphi, beta, 2.0, 1.0), Error);
}

TEST(Equilibria, ParamsValidate) {
  EXPECT_THROW((ModelParams{0.0, 1.0, 1.0}).validate(), Error);
  EXPECT_THROW((ModelParams{1.0, -1.0, 1.0}).validate(), Error);
  EXPECT_THROW((ModelParams{1.0, 1.0, 0.0}).validate(), Error);
}
