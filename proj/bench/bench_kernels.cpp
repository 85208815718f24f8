#include <benchmark/benchmark.h>

#include <cmath>
#include <vector>

#include "aggrokin/convolution.hpp"
#include "aggrokin/kernels.hpp"
#include "aggrokin/meso_solver.hpp"

using namespace aggrokin;

namespace {

DensityField field(int dim, int n) {
  DomainGrid g{dim, 20.0, n};
  DensityField u(g);
  for (std::size_t i = 0; i < g.size(); ++i) {
    const auto x = g.node(i);
    u.values[i] = 1.0 + 0.5 * std::cos(0.3 * x[0]) * std::cos(0.2 * x[1]);
  }
  return u;
}

void BM_Convolve(benchmark::State& state, ConvolutionMethod method, int dim) {
  const int n = static_cast<int>(state.range(0));
  const auto p = Potential::triangle(2.0, 1.0, dim);
  const auto u = field(dim, n);
  Convolver c(p, u.grid, method);
  std::vector<double> out(u.values.size());
  for (auto _ : state) {
    c.apply(u.values, out);
    benchmark::DoNotOptimize(out.data());
  }
  state.SetItemsProcessed(state.iterations() * static_cast<long>(u.values.size()));
}

void BM_Rhs(benchmark::State& state, bool parallel) {
  const auto u = field(1, static_cast<int>(state.range(0)));
  std::vector<double> conv(u.values.size(), 0.7), out(u.values.size());
  for (auto _ : state) {
    if (parallel)
      kernels::rhs_parallel(1.0, 1.0, u.values, conv, out);
    else
      kernels::rhs_serial(1.0, 1.0, u.values, conv, out);
    benchmark::DoNotOptimize(out.data());
  }
}

void BM_MolStep(benchmark::State& state) {
  const auto p = Potential::indicator_box(0.5, 1.0);
  auto u = field(1, static_cast<int>(state.range(0)));
  MolIntegrator integ({1.0, 1.0, 1.0}, p, u.grid);
  for (auto _ : state) integ.step(u, 1e-3);
}

}  // namespace

BENCHMARK_CAPTURE(BM_Convolve, direct_serial_1d, ConvolutionMethod::direct_serial, 1)->RangeMultiplier(4)->Range(256, 16384);
BENCHMARK_CAPTURE(BM_Convolve, direct_parallel_1d, ConvolutionMethod::direct_parallel, 1)->RangeMultiplier(4)->Range(256, 16384);
BENCHMARK_CAPTURE(BM_Convolve, fft_1d, ConvolutionMethod::fft, 1)->RangeMultiplier(4)->Range(256, 16384);
BENCHMARK_CAPTURE(BM_Convolve, direct_serial_2d, ConvolutionMethod::direct_serial, 2)->Arg(64)->Arg(128);
BENCHMARK_CAPTURE(BM_Convolve, direct_parallel_2d, ConvolutionMethod::direct_parallel, 2)->Arg(64)->Arg(128);
BENCHMARK_CAPTURE(BM_Convolve, fft_2d, ConvolutionMethod::fft, 2)->Arg(64)->Arg(128);
BENCHMARK_CAPTURE(BM_Rhs, serial, false)->Arg(1 << 16);
BENCHMARK_CAPTURE(BM_Rhs, parallel, true)->Arg(1 << 16);
BENCHMARK(BM_MolStep)->Arg(1024)->Arg(8192);

BENCHMARK_MAIN();
