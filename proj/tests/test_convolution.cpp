#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "aggrokin/convolution.hpp"
#include "aggrokin/errors.hpp"
#include "aggrokin/kernels.hpp"
#include "oracles.hpp"

using namespace aggrokin;

namespace {

DensityField random_field(const DomainGrid& g, unsigned seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> U(0.0, 2.0);
  DensityField u(g);
  for (auto& v : u.values) v = U(rng);
  return u;
}

}  // namespace

TEST(Convolution, StencilMassEqualsBetaForIndicator) {
  const DomainGrid g{1, 16.0, 256};
  const auto p = Potential::indicator_box(0.5, 1.5);
  EXPECT_NEAR(make_stencil(p, g).mass(), 1.5, 1e-13);
  const auto t = Potential::triangle(1.0, 2.0);
  EXPECT_NEAR(make_stencil(t, g).mass(), 2.0, 1e-8);
}

TEST(Convolution, ConstantMapsToBetaTimesConstant) {
  const DomainGrid g{1, 10.0, 128};
  const auto p = Potential::triangle(1.0, 1.0);
  const DensityField u(g, 0.7);
  for (auto method : {ConvolutionMethod::fft, ConvolutionMethod::direct_serial, ConvolutionMethod::direct_parallel}) {
    Convolver c(p, g, method);
    std::vector<double> out(g.size());
    c.apply(u.values, out);
    for (double v : out) EXPECT_NEAR(v, 0.7 * c.mass(), 1e-12);
  }
}

TEST(Convolution, MethodsAgreeWithDefinition1D) {
  const DomainGrid g{1, 12.0, 128};
  const auto p = Potential::truncated_gaussian(0.4, 1.0);
  const auto u = random_field(g, 5);
  const auto st = make_stencil(p, g);
  std::vector<double> w(g.size(), 0.0);
  for (std::size_t k = 0; k < st.size(); ++k) w[static_cast<std::size_t>((st.di[k] % g.n + g.n) % g.n)] += st.w[k];
  const auto ref = oracle::circular(w, u.values);
  for (auto method : {ConvolutionMethod::fft, ConvolutionMethod::direct_serial, ConvolutionMethod::direct_parallel}) {
    const auto out = convolve(p, u, method);
    for (std::size_t i = 0; i < g.size(); ++i) EXPECT_NEAR(out.values[i], ref[i], 1e-12);
  }
}

TEST(Convolution, SerialAndParallelDirectAreBitIdentical) {
  const DomainGrid g{2, 8.0, 64};
  const auto p = Potential::triangle(1.0, 1.0, 2);
  const auto u = random_field(g, 9);
  const auto a = convolve(p, u, ConvolutionMethod::direct_serial);
  const auto b = convolve(p, u, ConvolutionMethod::direct_parallel);
  EXPECT_EQ(a.values, b.values);
  const auto f = convolve(p, u, ConvolutionMethod::fft);
  EXPECT_LT(kernels::max_abs_diff(a.values, f.values), 1e-11);
}

TEST(Convolution, RhsKernelsAgree) {
  std::vector<double> u{0.1, 0.5, 2.0, 3.0}, c{0.0, 0.3, 1.0, 4.0}, s(4), q(4);
  kernels::rhs_serial(1.5, 0.4, u, c, s);
  kernels::rhs_parallel(1.5, 0.4, u, c, q);
  EXPECT_EQ(s, q);
  for (std::size_t i = 0; i < 4; ++i) EXPECT_DOUBLE_EQ(s[i], 0.4 - 1.5 * u[i] * std::exp(-c[i]));
}

TEST(Grid, ValidationAndInterpolation) {
  EXPECT_THROW((DomainGrid{1, 10.0, 100}).validate(), Error);  // not a power of two
  EXPECT_THROW((DomainGrid{3, 10.0, 64}).validate(), Error);
  const auto p = Potential::indicator_box(0.5, 1.0);
  EXPECT_THROW((DomainGrid{1, 10.0, 8}).validate_for(p), Error);   // pitch too coarse
  EXPECT_THROW((DomainGrid{1, 0.8, 64}).validate_for(p), Error);   // box smaller than 2 cutoff
  const DomainGrid g{1, 4.0, 4};  // nodes -2, -1, 0, 1
  DensityField u(g, std::vector<double>{0.0, 1.0, 2.0, 3.0});
  EXPECT_NEAR(interpolate(u, -0.5), 1.5, 1e-15);
  EXPECT_NEAR(interpolate(u, 1.5), 1.5, 1e-15);  // wraps from 3 back to 0
  EXPECT_NEAR(bin_average(u, -2.0, 0.0), 1.0, 1e-14);
  EXPECT_EQ(g.nearest(1.6), 0);
  EXPECT_EQ(u.shifted(1).values, (std::vector<double>{3.0, 0.0, 1.0, 2.0}));
}
