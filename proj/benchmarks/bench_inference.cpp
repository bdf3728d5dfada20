#include <benchmark/benchmark.h>

#include <vector>

#include "ift/covariance.hpp"
#include "ift/generators.hpp"
#include "ift/inference.hpp"

namespace {

using ift::Rational;

ift::InfoFlowTree<Rational> caterpillar(int t) {
  ift::CounterRng rng(7);
  return ift::random_simple_caterpillar<Rational>(rng, t, ift::grid_rational_sampler(8, true),
                                                  ift::grid_rational_sampler(8));
}

void BM_LeafDistributionRational(benchmark::State& state) {
  auto tree = caterpillar(static_cast<int>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(ift::leaf_distribution(tree));
}
BENCHMARK(BM_LeafDistributionRational)->DenseRange(4, 12, 4);

void BM_LeafDistributionDouble(benchmark::State& state) {
  auto tree = ift::to_float(caterpillar(static_cast<int>(state.range(0))));
  for (auto _ : state) benchmark::DoNotOptimize(ift::leaf_distribution(tree));
}
BENCHMARK(BM_LeafDistributionDouble)->DenseRange(4, 16, 4);

// Conditional covariance of the two end leaves given every other leaf.
struct EndPair {
  ift::InfoFlowTree<Rational> tree;
  ift::VertexId u, v;
  ift::Assignment outcome;
};

EndPair end_pair(int t) {
  EndPair p{caterpillar(t), t + 1, 2 * t, {}};
  for (int k = 2; k < t; ++k) p.outcome.set(t + k, k % 2 ? 1 : -1);
  return p;
}

void BM_CondCovFormula(benchmark::State& state) {
  auto p = end_pair(static_cast<int>(state.range(0)));
  for (auto _ : state) {
    auto decomp = ift::decompose_path(p.tree, p.u, p.v);
    benchmark::DoNotOptimize(ift::conditional_covariance_formula(decomp, ift::split_events(decomp, p.outcome)));
  }
}
BENCHMARK(BM_CondCovFormula)->DenseRange(4, 12, 4);

void BM_CondCovBruteForce(benchmark::State& state) {
  auto p = end_pair(static_cast<int>(state.range(0)));
  for (auto _ : state)
    benchmark::DoNotOptimize(ift::conditional_covariance_bruteforce(p.tree, p.u, p.v, p.outcome));
}
BENCHMARK(BM_CondCovBruteForce)->DenseRange(4, 10, 2)->Unit(benchmark::kMillisecond);

}  // namespace
