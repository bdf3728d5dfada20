#pragma once

// Tree families used by property tests, the acceptance suite and the scanner.

#include <functional>
#include <vector>

#include "ift/numeric.hpp"
#include "ift/rng.hpp"
#include "ift/tree.hpp"

namespace ift {

template <NumericField T>
using CorrelationSampler = std::function<T(CounterRng&)>;

/// k/denominator with k uniform in [-denominator, denominator].
CorrelationSampler<Rational> grid_rational_sampler(int denominator, bool nonnegative = false);
/// Uniform on [lo, hi].
CorrelationSampler<double> uniform_sampler(double lo, double hi);

/// Star with center 0 and leaves 1..m.
template <NumericField T>
InfoFlowTree<T> make_star(const std::vector<T>& leaf_rhos);

/// Spine vertices 1..t, leaf of spine vertex i is t + i. spine_rhos has
/// t - 1 entries, leaf_rhos has t.
template <NumericField T>
InfoFlowTree<T> make_simple_caterpillar(const std::vector<T>& spine_rhos,
                                        const std::vector<T>& leaf_rhos);

/// Path 1..n with the given n - 1 correlations.
template <NumericField T>
InfoFlowTree<T> make_path(const std::vector<T>& rhos);

/// Complete binary tree of the given depth (root 1, heap numbering) with a
/// constant correlation.
template <NumericField T>
InfoFlowTree<T> make_complete_binary(int depth, const T& rho);

/// Uniform labeled tree on n >= 2 vertices (ids 0..n-1) via a Pruefer code.
template <NumericField T>
InfoFlowTree<T> random_tree(CounterRng& rng, int n, const CorrelationSampler<T>& sampler);

/// Simple caterpillar with t leaves; spine correlations from `spine`, leaf
/// correlations from `leaf`.
template <NumericField T>
InfoFlowTree<T> random_simple_caterpillar(CounterRng& rng, int t, const CorrelationSampler<T>& spine,
                                          const CorrelationSampler<T>& leaf);

/// Caterpillar with leaves at distance two: each spine vertex carries one
/// edge to a hub, and each hub a star of 1..max_star leaves. Exactly t leaves.
template <NumericField T>
InfoFlowTree<T> random_depth2_caterpillar(CounterRng& rng, int t, const CorrelationSampler<T>& spine,
                                          const CorrelationSampler<T>& leaf);

/// General caterpillar (several leaves per spine vertex) with t leaves.
template <NumericField T>
InfoFlowTree<T> random_caterpillar(CounterRng& rng, int spine_length, int t,
                                   const CorrelationSampler<T>& spine,
                                   const CorrelationSampler<T>& leaf);

/// Star with m leaves.
template <NumericField T>
InfoFlowTree<T> random_star(CounterRng& rng, int m, const CorrelationSampler<T>& sampler);

}  // namespace ift
