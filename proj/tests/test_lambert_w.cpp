#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "aggrokin/errors.hpp"
#include "aggrokin/lambert_w.hpp"

using namespace aggrokin;

TEST(LambertW, KnownValues) {
  // Omega constant and the branch point.
  EXPECT_NEAR(lambert_w(Branch::principal, 1.0), 0.56714329040978387, 1e-15);
  EXPECT_NEAR(lambert_w(Branch::principal, std::exp(1.0)), 1.0, 1e-15);
  EXPECT_NEAR(lambert_w(Branch::principal, -std::exp(-1.0)), -1.0, 1e-7);
  EXPECT_NEAR(lambert_w(Branch::negative, -std::exp(-1.0)), -1.0, 1e-7);
  EXPECT_EQ(lambert_w(Branch::principal, 0.0), 0.0);
  // W_{-1}(-2 e^{-2}) = -2, W_{-1}(-0.1) from tables.
  EXPECT_NEAR(lambert_w(Branch::negative, -2.0 * std::exp(-2.0)), -2.0, 1e-13);
  EXPECT_NEAR(lambert_w(Branch::negative, -0.1), -3.5771520639572972, 1e-13);
}

TEST(LambertW, InverseIdentityBothBranches) {
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> w0(-0.999, 20.0), w1(-40.0, -1.001);
  for (int i = 0; i < 2000; ++i) {
    const double a = w0(rng);
    EXPECT_NEAR(lambert_w(Branch::principal, a * std::exp(a)), a, 1e-11 * std::max(1.0, std::abs(a)));
    const double b = w1(rng);
    EXPECT_NEAR(lambert_w(Branch::negative, b * std::exp(b)), b, 1e-11 * std::abs(b));
  }
}

TEST(LambertW, DomainErrors) {
  EXPECT_THROW(lambert_w(Branch::principal, -0.5), Error);
  EXPECT_THROW(lambert_w(Branch::negative, 0.1), Error);
  EXPECT_THROW(lambert_w(Branch::negative, 0.0), Error);
  EXPECT_THROW(lambert_w(Branch::principal, std::nan("")), Error);
}

TEST(LambertW, NegExpFormMatchesDirectAndExtendsRange) {
  for (double s : {-1.5, -3.0, -10.0, -25.0, -700.0}) {
    EXPECT_NEAR(lambert_wm1_neg_exp(s), lambert_w(Branch::negative, -std::exp(s)), 1e-12 * std::abs(s));
  }
  // w e^w = -e^s  <=>  ln(-w) + w = s for w < -1.
  for (double s : {-1e3, -1e5, -1e8}) {
    const double w = lambert_wm1_neg_exp(s);
    EXPECT_LT(w, -1.0);
    EXPECT_NEAR(std::log(-w) + w, s, 1e-12 * std::abs(s));
  }
  EXPECT_NEAR(lambert_wm1_neg_exp(-1.0), -1.0, 1e-7);
}
