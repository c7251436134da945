#include <benchmark/benchmark.h>

#include <cmath>
#include <numbers>

#include "ltdiag/covering.hpp"
#include "ltdiag/energy_bounds.hpp"
#include "ltdiag/pipeline.hpp"
#include "ltdiag/sobolev.hpp"
#include "ltdiag/variational.hpp"

using namespace ltdiag;

namespace {

GridFunction smooth_pair(int points, GridKind kind) {
  return GridFunction::sample(2, points, CubeDomain::unit(1), kind, [](std::span<const double> x) {
    return std::sin(2.0 * std::numbers::pi * x[0]) * std::cos(2.0 * std::numbers::pi * x[1]) + 0.5;
  });
}

void BM_SeminormInteger(benchmark::State& state) {
  const auto psi = smooth_pair(static_cast<int>(state.range(0)), GridKind::closed);
  for (auto _ : state) benchmark::DoNotOptimize(seminorm_HsN(psi, FractionalOrder(2.0), CubeDomain::unit(1)).value);
}
BENCHMARK(BM_SeminormInteger)->Arg(64)->Arg(128)->Arg(256);

void BM_SeminormGagliardo(benchmark::State& state) {
  const auto psi = smooth_pair(static_cast<int>(state.range(0)), GridKind::closed);
  for (auto _ : state) benchmark::DoNotOptimize(seminorm_HsN(psi, FractionalOrder(0.75), CubeDomain::unit(1)).value);
}
BENCHMARK(BM_SeminormGagliardo)->Arg(32)->Arg(64)->Arg(128);

void BM_SeminormFourier(benchmark::State& state) {
  const auto psi = smooth_pair(static_cast<int>(state.range(0)), GridKind::periodic);
  for (auto _ : state) benchmark::DoNotOptimize(global_seminorm_fourier(psi, FractionalOrder(1.5)));
}
BENCHMARK(BM_SeminormFourier)->Arg(64)->Arg(256);

void BM_Covering(benchmark::State& state) {
  const int d = static_cast<int>(state.range(0));
  const auto rho = named_density("two_bump", d, 40.0, d == 1 ? 1025 : 129);
  for (auto _ : state) benchmark::DoNotOptimize(build_covering(rho, std::pow(2.0, d) + 1.0, {2.0 / d, 1.0, 40}).cubes.size());
}
BENCHMARK(BM_Covering)->Arg(1)->Arg(2);

void BM_Propagation(benchmark::State& state) {
  const int n_max = static_cast<int>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(propagate_lower_bounds(1, FractionalOrder(1.0), {0.0, 1.0}, n_max).entries.back());
}
BENCHMARK(BM_Propagation)->Arg(64)->Arg(256)->Arg(1024);

void BM_GridEstimate(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  const int g = static_cast<int>(state.range(1));
  for (auto _ : state) benchmark::DoNotOptimize(grid_lower_estimate(1, FractionalOrder(1.0), n, {2, 1.0}, g).value);
}
BENCHMARK(BM_GridEstimate)->Args({2, 32})->Args({2, 128})->Args({3, 24})->Unit(benchmark::kMillisecond);

}  // namespace
BENCHMARK_MAIN();
