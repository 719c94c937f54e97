#include <benchmark/benchmark.h>

#include <vector>

#include "hciz/hciz_exact.hpp"
#include "hciz/hciz_mc.hpp"
#include "hciz/measures.hpp"

using namespace hciz;

namespace {

Spectrum grid(std::size_t n) {
  std::vector<double> v(n);
  for (std::size_t i = 0; i < n; ++i) v[i] = (i + 0.5) / static_cast<double>(n);
  return Spectrum(v);
}

Spectrum low_rank(std::size_t n, std::size_t m, double t) {
  std::vector<double> v(n, 0.0);
  for (std::size_t i = 0; i < m; ++i) v[i] = t;
  return Spectrum(v);
}

}  // namespace

static void BM_Confluent(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  const Spectrum a = low_rank(n, 4, 0.5), b = grid(n);
  for (auto _ : state) benchmark::DoNotOptimize(hciz_confluent(a, b));
}
BENCHMARK(BM_Confluent)->Arg(8)->Arg(16)->Arg(32)->Arg(64)->Unit(benchmark::kMillisecond);

static void BM_Det(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  const Spectrum a = grid(n).scaled(0.5), b = grid(n);
  for (auto _ : state) benchmark::DoNotOptimize(hciz_det(a, b));
}
BENCHMARK(BM_Det)->Arg(4)->Arg(6)->Arg(8);

static void BM_RankOne(benchmark::State& state) {
  const Spectrum b = grid(static_cast<std::size_t>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(hciz_rank_one(0.7, b));
}
BENCHMARK(BM_RankOne)->Arg(16)->Arg(64)->Arg(256);

static void BM_MonteCarlo(benchmark::State& state) {
  const int beta = static_cast<int>(state.range(0));
  const Spectrum a = low_rank(4, 2, 0.5), b = grid(4);
  McOptions o;
  o.n_samples = 10000;
  o.seed = 3;
  o.workers = 1;
  for (auto _ : state) benchmark::DoNotOptimize(hciz_mc_estimate(a, b, BetaClass(beta), o));
}
BENCHMARK(BM_MonteCarlo)->Arg(1)->Arg(2)->Arg(4)->Unit(benchmark::kMillisecond);

static void BM_BlDistance(benchmark::State& state) {
  const auto u = SpectralMeasure::uniform(0, 1);
  const auto e = empirical_measure(sample_spectrum(u, static_cast<std::size_t>(state.range(0))));
  for (auto _ : state) benchmark::DoNotOptimize(bl_distance(e, u));
}
BENCHMARK(BM_BlDistance)->Arg(100)->Arg(1000)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
