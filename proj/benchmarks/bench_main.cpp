#include <benchmark/benchmark.h>

#include <random>
#include <vector>

#include "semistab/experiments.hpp"
#include "semistab/measure.hpp"
#include "semistab/operator.hpp"
#include "semistab/semigroup.hpp"

namespace {

using namespace semistab;

void BM_Discretize1d(benchmark::State& state) {
  const Potential v(1.0, 1, Potential::GaussianWell{1.0, 1.0});
  const double h = 2.0 * 20.0 / static_cast<double>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(discretize(v, 20.0, h).top_eigenvalue());
}
BENCHMARK(BM_Discretize1d)->Arg(200)->Arg(400)->Arg(800)->Unit(benchmark::kMillisecond);

void BM_Discretize2d(benchmark::State& state) {
  const Potential v(1.0, 2, Potential::GaussianWell{1.0, 1.0});
  const double h = 2.0 * 5.0 / static_cast<double>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(discretize(v, 5.0, h).top_eigenvalue());
}
BENCHMARK(BM_Discretize2d)->Arg(20)->Arg(30)->Unit(benchmark::kMillisecond);

void BM_LaplaceDensity(benchmark::State& state) {
  const SpectralMeasure mu = DensityMeasure::f_delta(0.75);
  const double t = static_cast<double>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(laplace_norm_sq(mu, t, ValueScale::kLog));
}
BENCHMARK(BM_LaplaceDensity)->Arg(10)->Arg(10000)->Arg(1000000);

void BM_LaplaceAtomic(benchmark::State& state) {
  std::mt19937_64 rng(1);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  std::vector<std::pair<double, double>> atoms;
  for (int i = 0; i < state.range(0); ++i) atoms.emplace_back(-10.0 * (1.0 - u(rng)), 1.0 - u(rng));
  const SpectralMeasure mu = AtomicMeasure::from_pairs(atoms);
  for (auto _ : state) benchmark::DoNotOptimize(laplace_norm_sq(mu, 3.0, ValueScale::kLog));
}
BENCHMARK(BM_LaplaceAtomic)->Arg(20)->Arg(2000);

void BM_ScalingExponents(benchmark::State& state) {
  const SpectralMeasure mu = DensityMeasure::f_delta(0.75);
  for (auto _ : state) benchmark::DoNotOptimize(scaling_exponents(mu, 1e-6, 0.1, 64));
}
BENCHMARK(BM_ScalingExponents);

void BM_LacunaryScalingExponents(benchmark::State& state) {
  const std::vector<double> e{0.5, 4, 0.5, 4, 0.5, 4, 0.5, 4, 0.5, 4, 0.5, 4};
  const SpectralMeasure mu = lacunary_measure(0.5, e, 12);
  for (auto _ : state) {
    benchmark::DoNotOptimize(scaling_exponents(mu, Magnitude::pow2(-2048), Magnitude::pow2(-4), 64));
  }
}
BENCHMARK(BM_LacunaryScalingExponents);

void BM_EvolveNorms(benchmark::State& state) {
  const SpectralMeasure mu = DensityMeasure::f_delta(0.75);
  const int jobs = static_cast<int>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(evolve_norms(mu, 10.0, 1e6, 200, jobs));
}
BENCHMARK(BM_EvolveNorms)->Arg(1)->Arg(4)->Unit(benchmark::kMillisecond)->UseRealTime();

}  // namespace
BENCHMARK_MAIN();
