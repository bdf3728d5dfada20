#include "ift/generators.hpp"

#include <numeric>
#include <set>

#include "ift/errors.hpp"

namespace ift {

CorrelationSampler<Rational> grid_rational_sampler(int denominator, bool nonnegative) {
  if (denominator <= 0) throw Error(ErrorCode::kInvalidArgument, "grid denominator must be positive");
  return [denominator, nonnegative](CounterRng& rng) {
    std::int64_t k = rng.between(nonnegative ? 0 : -denominator, denominator);
    return Field<Rational>::from_ratio(k, denominator);
  };
}

CorrelationSampler<double> uniform_sampler(double lo, double hi) {
  if (!(lo <= hi) || lo < -1.0 || hi > 1.0)
    throw Error(ErrorCode::kInvalidArgument, "sampler range must lie in [-1, 1]");
  return [lo, hi](CounterRng& rng) { return rng.uniform(lo, hi); };
}

template <NumericField T>
InfoFlowTree<T> make_star(const std::vector<T>& leaf_rhos) {
  if (leaf_rhos.empty()) throw Error(ErrorCode::kInvalidArgument, "a star needs at least one leaf");
  std::vector<VertexId> vertices{0}, leaves;
  std::vector<Edge<T>> edges;
  for (std::size_t i = 0; i < leaf_rhos.size(); ++i) {
    VertexId id = static_cast<VertexId>(i + 1);
    vertices.push_back(id);
    leaves.push_back(id);
    edges.push_back({0, id, leaf_rhos[i]});
  }
  return InfoFlowTree<T>(std::move(vertices), std::move(edges), std::move(leaves));
}

template <NumericField T>
InfoFlowTree<T> make_simple_caterpillar(const std::vector<T>& spine_rhos, const std::vector<T>& leaf_rhos) {
  const auto t = static_cast<VertexId>(leaf_rhos.size());
  if (t < 2 || spine_rhos.size() + 1 != leaf_rhos.size())
    throw Error(ErrorCode::kInvalidArgument, "simple caterpillar needs t >= 2 leaf and t - 1 spine correlations");
  std::vector<VertexId> vertices(2 * t), leaves;
  std::iota(vertices.begin(), vertices.end(), VertexId{1});
  std::vector<Edge<T>> edges;
  for (VertexId i = 1; i < t; ++i) edges.push_back({i, i + 1, spine_rhos[i - 1]});
  for (VertexId i = 1; i <= t; ++i) {
    edges.push_back({i, t + i, leaf_rhos[i - 1]});
    leaves.push_back(t + i);
  }
  return InfoFlowTree<T>(std::move(vertices), std::move(edges), std::move(leaves));
}

template <NumericField T>
InfoFlowTree<T> make_path(const std::vector<T>& rhos) {
  if (rhos.empty()) throw Error(ErrorCode::kInvalidArgument, "a path needs at least one edge");
  const auto n = static_cast<VertexId>(rhos.size() + 1);
  std::vector<VertexId> vertices(n);
  std::iota(vertices.begin(), vertices.end(), VertexId{1});
  std::vector<Edge<T>> edges;
  for (VertexId i = 1; i < n; ++i) edges.push_back({i, i + 1, rhos[i - 1]});
  return InfoFlowTree<T>(std::move(vertices), std::move(edges));
}

template <NumericField T>
InfoFlowTree<T> make_complete_binary(int depth, const T& rho) {
  if (depth < 1 || depth > 20) throw Error(ErrorCode::kInvalidArgument, "depth must be in 1..20");
  const VertexId n = (VertexId{1} << (depth + 1)) - 1;
  std::vector<VertexId> vertices(n);
  std::iota(vertices.begin(), vertices.end(), VertexId{1});
  std::vector<Edge<T>> edges;
  for (VertexId i = 2; i <= n; ++i) edges.push_back({i / 2, i, rho});
  return InfoFlowTree<T>(std::move(vertices), std::move(edges));
}

template <NumericField T>
InfoFlowTree<T> random_tree(CounterRng& rng, int n, const CorrelationSampler<T>& sampler) {
  if (n < 2) throw Error(ErrorCode::kInvalidArgument, "random tree needs n >= 2");
  std::vector<VertexId> vertices(n);
  std::iota(vertices.begin(), vertices.end(), VertexId{0});
  std::vector<Edge<T>> edges;
  std::vector<int> code(n - 2);
  for (int& c : code) c = static_cast<int>(rng.below(n));
  std::vector<int> degree(n, 1);
  for (int c : code) ++degree[c];
  std::set<int> ready;
  for (int v = 0; v < n; ++v)
    if (degree[v] == 1) ready.insert(v);
  for (int c : code) {
    int leaf = *ready.begin();
    ready.erase(ready.begin());
    edges.push_back({c, leaf, sampler(rng)});
    if (--degree[c] == 1) ready.insert(c);
  }
  int a = *ready.begin(), b = *ready.rbegin();
  edges.push_back({a, b, sampler(rng)});
  return InfoFlowTree<T>(std::move(vertices), std::move(edges));
}

template <NumericField T>
InfoFlowTree<T> random_simple_caterpillar(CounterRng& rng, int t, const CorrelationSampler<T>& spine,
                                          const CorrelationSampler<T>& leaf) {
  if (t < 2) throw Error(ErrorCode::kInvalidArgument, "simple caterpillar needs t >= 2");
  std::vector<T> s, l;
  for (int i = 0; i + 1 < t; ++i) s.push_back(spine(rng));
  for (int i = 0; i < t; ++i) l.push_back(leaf(rng));
  return make_simple_caterpillar(s, l);
}

template <NumericField T>
InfoFlowTree<T> random_depth2_caterpillar(CounterRng& rng, int t, const CorrelationSampler<T>& spine,
                                          const CorrelationSampler<T>& leaf) {
  if (t < 2) throw Error(ErrorCode::kInvalidArgument, "depth-2 caterpillar needs t >= 2");
  constexpr int kMaxStar = 3;
  std::vector<int> groups;
  for (int remaining = t; remaining > 0;) {
    int cap = std::min(kMaxStar, groups.empty() ? remaining - 1 : remaining);
    int size = static_cast<int>(rng.between(1, cap));
    groups.push_back(size);
    remaining -= size;
  }
  const auto g = static_cast<VertexId>(groups.size());
  std::vector<VertexId> vertices, leaves;
  std::vector<Edge<T>> edges;
  for (VertexId i = 1; i <= 2 * g; ++i) vertices.push_back(i);
  for (VertexId i = 1; i < g; ++i) edges.push_back({i, i + 1, spine(rng)});
  VertexId next = 2 * g + 1;
  for (VertexId i = 1; i <= g; ++i) {
    edges.push_back({i, g + i, spine(rng)});
    for (int k = 0; k < groups[i - 1]; ++k) {
      vertices.push_back(next);
      leaves.push_back(next);
      edges.push_back({g + i, next, leaf(rng)});
      ++next;
    }
  }
  return InfoFlowTree<T>(std::move(vertices), std::move(edges), std::move(leaves));
}

template <NumericField T>
InfoFlowTree<T> random_caterpillar(CounterRng& rng, int spine_length, int t,
                                   const CorrelationSampler<T>& spine, const CorrelationSampler<T>& leaf) {
  if (spine_length < 1 || t < 2 || t < std::min(spine_length, 2))
    throw Error(ErrorCode::kInvalidArgument, "caterpillar needs spine >= 1 and t >= 2");
  const VertexId s = spine_length;
  std::vector<VertexId> vertices, leaves;
  std::vector<Edge<T>> edges;
  for (VertexId i = 1; i <= s; ++i) vertices.push_back(i);
  for (VertexId i = 1; i < s; ++i) edges.push_back({i, i + 1, spine(rng)});
  for (int k = 0; k < t; ++k) {
    // Both spine ends get a leaf so that they stay internal.
    VertexId host = k == 0 ? 1 : (k == 1 ? s : static_cast<VertexId>(rng.between(1, s)));
    VertexId id = s + 1 + k;
    vertices.push_back(id);
    leaves.push_back(id);
    edges.push_back({host, id, leaf(rng)});
  }
  return InfoFlowTree<T>(std::move(vertices), std::move(edges), std::move(leaves));
}

template <NumericField T>
InfoFlowTree<T> random_star(CounterRng& rng, int m, const CorrelationSampler<T>& sampler) {
  if (m < 1) throw Error(ErrorCode::kInvalidArgument, "a star needs at least one leaf");
  std::vector<T> rhos;
  for (int i = 0; i < m; ++i) rhos.push_back(sampler(rng));
  return make_star(rhos);
}

#define IFT_INSTANTIATE(T)                                                                          \
  template InfoFlowTree<T> make_star(const std::vector<T>&);                                        \
  template InfoFlowTree<T> make_simple_caterpillar(const std::vector<T>&, const std::vector<T>&);   \
  template InfoFlowTree<T> make_path(const std::vector<T>&);                                        \
  template InfoFlowTree<T> make_complete_binary(int, const T&);                                     \
  template InfoFlowTree<T> random_tree(CounterRng&, int, const CorrelationSampler<T>&);             \
  template InfoFlowTree<T> random_simple_caterpillar(CounterRng&, int, const CorrelationSampler<T>&, \
                                                     const CorrelationSampler<T>&);                 \
  template InfoFlowTree<T> random_depth2_caterpillar(CounterRng&, int, const CorrelationSampler<T>&, \
                                                     const CorrelationSampler<T>&);                 \
  template InfoFlowTree<T> random_caterpillar(CounterRng&, int, int, const CorrelationSampler<T>&,  \
                                              const CorrelationSampler<T>&);                        \
  template InfoFlowTree<T> random_star(CounterRng&, int, const CorrelationSampler<T>&);
IFT_INSTANTIATE(Rational)
IFT_INSTANTIATE(double)
#undef IFT_INSTANTIATE

}  // namespace ift
