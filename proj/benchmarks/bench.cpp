#include <benchmark/benchmark.h>

#include "cherlb/chi2.hpp"
#include "cherlb/mimo.hpp"
#include "cherlb/ris.hpp"
#include "cherlb/solver.hpp"

using namespace cherlb;

static void BM_noncentral_cdf(benchmark::State& state) {
  const NoncentralChiSquareSpec spec(4, static_cast<double>(state.range(0)),
                                     1.0);
  const double x = 0.3 * spec.mean();
  for (auto _ : state) benchmark::DoNotOptimize(noncentral_cdf(spec, x));
}
BENCHMARK(BM_noncentral_cdf)->Arg(10)->Arg(1000)->Arg(100000);

static void BM_solve_noncentral(benchmark::State& state) {
  const NoncentralChiSquareSpec spec(4, static_cast<double>(state.range(0)),
                                     1.0);
  const auto target = ReliabilityTarget::from_epsilon(1e-6);
  for (auto _ : state)
    benchmark::DoNotOptimize(solve_noncentral(spec, target).bound);
}
BENCHMARK(BM_solve_noncentral)->Arg(10)->Arg(1000);

static void BM_solve_general(benchmark::State& state) {
  const GeneralizedChiSquareSpec spec({{1.0, 0.5}, {0.0, 1.0}, {2.0, 2.0}});
  const auto target = ReliabilityTarget::from_epsilon(1e-6);
  for (auto _ : state)
    benchmark::DoNotOptimize(solve_general(spec, target).bound);
}
BENCHMARK(BM_solve_general);

static void BM_numeric_quantile(benchmark::State& state) {
  const NoncentralChiSquareSpec spec(4, 100.0, 1.0);
  const auto target = ReliabilityTarget::from_epsilon(1e-6);
  for (auto _ : state)
    benchmark::DoNotOptimize(numeric_quantile(spec, target));
}
BENCHMARK(BM_numeric_quantile);

static void BM_mimo_trial(benchmark::State& state) {
  const mimo::MarkovChannelParams params;
  std::uint64_t trial = 0;
  for (auto _ : state) {
    const auto h = mimo::sample_channel(2, static_cast<int>(state.range(0)),
                                        1, trial++);
    benchmark::DoNotOptimize(mimo::mf_beamformer(h));
  }
}
BENCHMARK(BM_mimo_trial)->Arg(16)->Arg(64);

static void BM_ris_sample(benchmark::State& state) {
  ris::RisConfig cfg;
  cfg.reflectors = static_cast<int>(state.range(0));
  cfg.kappa_h = cfg.kappa_g = 3.0;
  std::uint64_t i = 0;
  for (auto _ : state)
    benchmark::DoNotOptimize(ris::sample_gain_one(cfg, 1, i++));
  state.SetItemsProcessed(state.iterations() * cfg.reflectors);
}
BENCHMARK(BM_ris_sample)->Arg(16)->Arg(256);

BENCHMARK_MAIN();
