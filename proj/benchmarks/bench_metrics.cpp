#include <benchmark/benchmark.h>

#include "ift/generators.hpp"
#include "ift/inference.hpp"
#include "ift/metrics.hpp"

namespace {

using ift::Rational;

void BM_AvgCovCondStar(benchmark::State& state) {
  const int leaves = static_cast<int>(state.range(0));
  auto star = ift::make_star<Rational>(std::vector<Rational>(leaves, ift::parse_rational("1/2")));
  auto law = ift::leaf_distribution(star);
  for (auto _ : state) benchmark::DoNotOptimize(ift::avg_cov_cond(law, leaves - 2));
}
BENCHMARK(BM_AvgCovCondStar)->DenseRange(4, 10, 2)->Unit(benchmark::kMillisecond);

void BM_AvgCovCondFloat(benchmark::State& state) {
  const int leaves = static_cast<int>(state.range(0));
  auto star = ift::make_star<double>(std::vector<double>(leaves, 0.5));
  auto law = ift::leaf_distribution(star);
  for (auto _ : state) benchmark::DoNotOptimize(ift::avg_cov_cond(law, (leaves - 2) / 2));
}
BENCHMARK(BM_AvgCovCondFloat)->DenseRange(6, 12, 2)->Unit(benchmark::kMillisecond);

void BM_HomogeneousStarShortcut(benchmark::State& state) {
  const auto rho = ift::parse_rational("1/2");
  for (auto _ : state) benchmark::DoNotOptimize(ift::homogeneous_star_cond_variance(rho, static_cast<int>(state.range(0))));
}
BENCHMARK(BM_HomogeneousStarShortcut)->Arg(8)->Arg(64)->Arg(512);

}  // namespace
