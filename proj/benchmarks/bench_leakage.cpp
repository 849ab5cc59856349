#include <benchmark/benchmark.h>

#include "mleak/cipher.hpp"
#include "mleak/estimation.hpp"
#include "mleak/mechanism.hpp"
#include "mleak/metrics.hpp"
#include "mleak/random.hpp"

using namespace mleak;

static void BM_MaximalLeakage(benchmark::State& state) {
  auto n = static_cast<std::size_t>(state.range(0));
  Rng rng = make_rng(1);
  JointPmf j = random_joint(rng, n, n);
  for (auto _ : state) benchmark::DoNotOptimize(maximal_leakage(j));
  state.SetComplexityN(state.range(0));
}
BENCHMARK(BM_MaximalLeakage)->RangeMultiplier(4)->Range(4, 256)->Complexity();

static void BM_Capacity(benchmark::State& state) {
  auto n = static_cast<std::size_t>(state.range(0));
  Rng rng = make_rng(2);
  Channel w = random_channel(rng, n, n);
  for (auto _ : state) benchmark::DoNotOptimize(capacity_detailed(w, 1e-9));
}
BENCHMARK(BM_Capacity)->Arg(4)->Arg(16)->Arg(64);

static void BM_MaximalCorrelation(benchmark::State& state) {
  auto n = static_cast<std::size_t>(state.range(0));
  Rng rng = make_rng(3);
  JointPmf j = random_joint(rng, n, n);
  for (auto _ : state) benchmark::DoNotOptimize(maximal_correlation(j));
}
BENCHMARK(BM_MaximalCorrelation)->Arg(4)->Arg(16)->Arg(64);

static void BM_MechanismLp(benchmark::State& state) {
  auto n = static_cast<std::size_t>(state.range(0));
  Rng rng = make_rng(4);
  Pmf px = random_pmf(rng, n);
  DistortionSpec spec = DistortionSpec::hamming(n, 0.3);
  for (auto _ : state) benchmark::DoNotOptimize(min_leakage_general(px, spec));
}
BENCHMARK(BM_MechanismLp)->Arg(2)->Arg(4)->Arg(8);

static void BM_CipherBuild(benchmark::State& state) {
  CipherParams p;
  p.n = static_cast<unsigned>(state.range(0));
  p.source = Pmf(std::vector<double>{0.5, 0.5});
  p.spec = DistortionSpec::hamming(2, 0.25);
  p.key_rate_bits = 0.25;
  p.alpha_bits = 0.05;
  for (auto _ : state) benchmark::DoNotOptimize(CipherScheme::build(p).key_bits());
}
BENCHMARK(BM_CipherBuild)->Arg(8)->Arg(12)->Unit(benchmark::kMillisecond);

static void BM_PoissonEstimator(benchmark::State& state) {
  Rng rng = make_rng(5);
  JointPmf j = random_joint(rng, 8, 8);
  SampleSet s = sample_poisson(j, static_cast<double>(state.range(0)), 7);
  EstimatorConfig cfg{0.5, 0.1, 0.1, 0};
  for (auto _ : state) benchmark::DoNotOptimize(estimate_ml_poisson(s, cfg, 9));
}
BENCHMARK(BM_PoissonEstimator)->Arg(1000)->Arg(100000);
BENCHMARK_MAIN();
