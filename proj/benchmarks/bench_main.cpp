#include <benchmark/benchmark.h>

#include "qsmooth/entropy.hpp"
#include "qsmooth/random_states.hpp"
#include "qsmooth/smoothing.hpp"
#include "qsmooth/spectral.hpp"
#include "qsmooth/spectrum_rates.hpp"
#include "qsmooth/weighted_spectrum.hpp"

namespace {

using namespace qsmooth;

void BM_SpectralProjector(benchmark::State& state) {
  const int dim = static_cast<int>(state.range(0));
  const HermitianOperator a = random_hermitian(1, dim);
  const HermitianOperator b = random_hermitian(2, dim);
  for (auto _ : state) {
    benchmark::DoNotOptimize(
        spectral_projector(a, b, SpectralRelation::GreaterEqual));
  }
}
BENCHMARK(BM_SpectralProjector)->Arg(8)->Arg(16)->Arg(32)->Arg(64);

void BM_Fidelity(benchmark::State& state) {
  const int dim = static_cast<int>(state.range(0));
  const QuantumState rho = random_density(3, dim);
  const QuantumState rho2 = random_density(4, dim);
  for (auto _ : state) benchmark::DoNotOptimize(fidelity(rho, rho2));
}
BENCHMARK(BM_Fidelity)->Arg(8)->Arg(32);

void BM_SmoothHminUnconditional(benchmark::State& state) {
  const int dim = static_cast<int>(state.range(0));
  const QuantumState rho = random_density(5, dim);
  for (auto _ : state)
    benchmark::DoNotOptimize(smooth_hmin_unconditional(rho, 0.1));
}
BENCHMARK(BM_SmoothHminUnconditional)->Arg(8)->Arg(32);

void BM_IidSpectrum(benchmark::State& state) {
  const long n = state.range(0);
  const std::vector<double> base{0.75, 0.25};
  for (auto _ : state) benchmark::DoNotOptimize(iid_spectrum(base, n));
}
BENCHMARK(BM_IidSpectrum)->Arg(100)->Arg(1000)->Arg(10000);

void BM_RateScanRow(benchmark::State& state) {
  const long n = state.range(0);
  const std::vector<double> base{0.75, 0.25};
  const WeightedSpectrum spec = iid_spectrum(base, n);
  for (auto _ : state)
    benchmark::DoNotOptimize(smooth_hmin_classical(spec, 0.01));
}
BENCHMARK(BM_RateScanRow)->Arg(1000)->Arg(10000);

void BM_ConditionalLower(benchmark::State& state) {
  const BipartiteState rho = random_bipartite(6, 2, 2);
  const QuantumState sigma = partial_trace(rho, Subsystem::B);
  for (auto _ : state)
    benchmark::DoNotOptimize(smooth_hmin_conditional_lower(rho, sigma, 0.1));
}
BENCHMARK(BM_ConditionalLower);

void BM_Oracle2x2(benchmark::State& state) {
  const BipartiteState rho = random_bipartite(7, 2, 2);
  const QuantumState sigma = partial_trace(rho, Subsystem::B);
  for (auto _ : state) {
    OracleOptions opt;
    opt.seed = 8;
    benchmark::DoNotOptimize(
        smooth_hmin_conditional_oracle(rho, sigma, 0.1, opt));
  }
}
BENCHMARK(BM_Oracle2x2);

}  // namespace

BENCHMARK_MAIN();
