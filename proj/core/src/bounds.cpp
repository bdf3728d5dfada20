#include "ift/bounds.hpp"

#include <bit>
#include <cmath>
#include <cstdio>
#include <functional>

#include "ift/errors.hpp"
#include "ift/generators.hpp"
#include "ift/metrics.hpp"
#include "ift/parallel.hpp"
#include "ift/transforms.hpp"

namespace ift {

namespace {

// Products prod (1 + rho_i y_i)/2 and prod (1 - rho_i y_i)/2 for outcome bits.
template <NumericField T>
std::pair<T, T> star_likelihoods(const std::vector<T>& rhos, std::size_t bits) {
  T a = Field<T>::from_ratio(1, 1), b = a;
  for (std::size_t i = 0; i < rhos.size(); ++i) {
    const int y = ((bits >> i) & 1u) ? -1 : 1;
    a *= edge_transition(rhos[i], y);
    b *= edge_transition(rhos[i], -y);
  }
  return {a, b};
}

template <NumericField T>
StarSpec<T> require_star(const InfoFlowTree<T>& tree, std::size_t cap) {
  auto spec = star_spec(tree);
  if (!spec) throw Error(ErrorCode::kPrecondition, "tree is not a star");
  if (spec->leaves.size() > cap)
    throw Error(ErrorCode::kCapExceeded,
                std::to_string(spec->leaves.size()) + " leaves exceed cap " + std::to_string(cap));
  return *spec;
}

}  // namespace

template <NumericField T>
std::optional<StarSpec<T>> star_spec(const InfoFlowTree<T>& tree) {
  if (!validate(tree).empty()) return std::nullopt;
  auto internal = tree.internal_vertices();
  if (internal.size() != 1) return std::nullopt;
  StarSpec<T> spec;
  spec.center = internal.front();
  spec.alpha = Field<T>::from_ratio(0, 1);
  for (VertexId l : tree.leaves()) {
    if (!tree.edge_between(spec.center, l)) return std::nullopt;
    spec.leaves.push_back(l);
    spec.rhos.push_back(tree.rho(spec.center, l));
    spec.alpha += spec.rhos.back() * spec.rhos.back();
  }
  return spec;
}

double star_bound(double alpha) {
  if (!(alpha >= 0.0)) throw Error(ErrorCode::kInvalidArgument, "alpha must be nonnegative");
  return 4.0 * std::exp(-alpha / 2.0);
}

template <NumericField T>
T star_expected_center_variance(const InfoFlowTree<T>& tree, std::size_t cap) {
  const auto spec = require_star(tree, cap);
  // Pr[Y = y] Var[X_0 | y] = (A + B)/2 * 4AB/(A + B)^2 = 2AB/(A + B).
  T total = Field<T>::from_ratio(0, 1);
  const T zero = total, two = Field<T>::from_ratio(2, 1);
  for (std::size_t bits = 0; bits < (std::size_t{1} << spec.rhos.size()); ++bits) {
    auto [a, b] = star_likelihoods(spec.rhos, bits);
    if (a + b == zero) continue;
    total += two * a * b / (a + b);
  }
  return total;
}

template <NumericField T>
Spin star_sign_statistic(std::span<const T> rhos, const Assignment& outcome,
                         std::span<const VertexId> leaves) {
  if (rhos.size() != leaves.size())
    throw Error(ErrorCode::kInvalidArgument, "one correlation per leaf required");
  T s = Field<T>::from_ratio(0, 1);
  for (std::size_t i = 0; i < rhos.size(); ++i) {
    if (outcome.at(leaves[i]).positive()) s += rhos[i]; else s -= rhos[i];
  }
  return Spin(s >= Field<T>::from_ratio(0, 1) ? 1 : -1);
}

template <NumericField T>
T star_sign_error_probability(const StarSpec<T>& spec) {
  if (spec.leaves.size() > kDefaultVariableCap)
    throw Error(ErrorCode::kCapExceeded, "too many star leaves to enumerate");
  const T h = half<T>();
  T total = Field<T>::from_ratio(0, 1);
  for (std::size_t bits = 0; bits < (std::size_t{1} << spec.rhos.size()); ++bits) {
    Assignment y;
    for (std::size_t i = 0; i < spec.leaves.size(); ++i) y.set(spec.leaves[i], Spin::from_bit((bits >> i) & 1u));
    auto [a, b] = star_likelihoods(spec.rhos, bits);
    Spin s = star_sign_statistic<T>(spec.rhos, y, spec.leaves);
    total += h * (s.positive() ? b : a);
  }
  return total;
}

double theoremC_star_quantity(std::span<const double> rhos) {
  const std::size_t t = rhos.size();
  if (t < 2) throw Error(ErrorCode::kInvalidArgument, "need at least two correlations");
  std::vector<double> prefix(t + 1, 0.0);  // prefix[i] = sum_{j < i} rho_j^2
  for (std::size_t i = 0; i < t; ++i) prefix[i + 1] = prefix[i] + rhos[i] * rhos[i];
  double total = 0.0;
  for (std::size_t u = 0; u < t; ++u)
    for (std::size_t v = u + 1; v < t; ++v) {
      double alpha = prefix[v] - prefix[u + 1];
      total += std::fabs(rhos[u]) * std::fabs(rhos[v]) * std::exp(-alpha / 2.0);
    }
  return total / (static_cast<double>(t) * static_cast<double>(t - 1) / 2.0);
}

double theoremC_series_term(int k) {
  if (k < 0) throw Error(ErrorCode::kInvalidArgument, "series index must be nonnegative");
  return std::exp(-std::ldexp(1.0, k - 2)) * std::ldexp(1.0, k + 1);
}

double theoremC_constant_from_series(double term_tolerance) {
  if (!(term_tolerance > 0.0)) throw Error(ErrorCode::kInvalidArgument, "tolerance must be positive");
  double sum = 0.0;
  for (int k = 0;; ++k) {
    double term = theoremC_series_term(k);
    sum += term;
    if (k > 2 && term < term_tolerance) break;
  }
  return 4.0 * (2.0 + std::exp(0.25) * sum);
}

template <NumericField T>
JointDistribution<T> parity_counterexample(int order, std::size_t cap) {
  if (order < 1) throw Error(ErrorCode::kInvalidArgument, "order must be at least 1");
  const std::size_t n = static_cast<std::size_t>(order) + 2;
  if (n > cap)
    throw Error(ErrorCode::kCapExceeded, std::to_string(n) + " variables exceed cap " + std::to_string(cap));
  std::vector<VertexId> labels;
  for (std::size_t i = 1; i <= n; ++i) labels.push_back(static_cast<VertexId>(i));
  const T mass = Field<T>::from_ratio(1, std::int64_t{1} << (n - 1));
  const T zero = Field<T>::from_ratio(0, 1);
  std::vector<T> probs(std::size_t{1} << n);
  for (std::size_t i = 0; i < probs.size(); ++i) probs[i] = (std::popcount(i) % 2 == 0) ? mass : zero;
  return JointDistribution<T>(std::move(labels), std::move(probs), cap);
}

std::string_view family_name(TreeFamily family) {
  switch (family) {
    case TreeFamily::kSimpleCaterpillar: return "simple-caterpillar";
    case TreeFamily::kDepth2Caterpillar: return "depth2-caterpillar";
    case TreeFamily::kCompleteBinary: return "complete-binary";
    case TreeFamily::kRandomTree: return "random-tree";
  }
  return "unknown";
}

TreeFamily parse_family(std::string_view name) {
  for (auto f : {TreeFamily::kSimpleCaterpillar, TreeFamily::kDepth2Caterpillar, TreeFamily::kCompleteBinary,
                 TreeFamily::kRandomTree})
    if (family_name(f) == name) return f;
  throw Error(ErrorCode::kInvalidArgument, "unknown tree family '" + std::string(name) + "'");
}

namespace {

InfoFlowTree<double> scan_tree(TreeFamily family, CounterRng& rng, int min_leaves, int max_leaves) {
  const auto leaf = uniform_sampler(-1.0, 1.0);
  const auto spine = uniform_sampler(0.0, 1.0);
  switch (family) {
    case TreeFamily::kSimpleCaterpillar:
      return random_simple_caterpillar<double>(rng, static_cast<int>(rng.between(min_leaves, max_leaves)), spine, leaf);
    case TreeFamily::kDepth2Caterpillar:
      return random_depth2_caterpillar<double>(rng, static_cast<int>(rng.between(min_leaves, max_leaves)), spine, leaf);
    case TreeFamily::kCompleteBinary: {
      std::vector<int> depths;
      for (int d = 1; (1 << d) <= max_leaves; ++d)
        if ((1 << d) >= min_leaves) depths.push_back(d);
      int d = depths[rng.below(depths.size())];
      return make_complete_binary<double>(d, rng.uniform(0.0, 1.0));
    }
    case TreeFamily::kRandomTree: {
      // n vertices give at most n - 1 leaves.
      int n = static_cast<int>(rng.between(std::max(min_leaves + 1, 3), max_leaves + 1));
      return normalize_internal_signs(random_tree<double>(rng, n, leaf)).tree;
    }
  }
  throw Error(ErrorCode::kInvalidArgument, "unknown tree family");
}

}  // namespace

std::vector<ScanRecord> scan_conjectureB(const ScanOptions& options) {
  if (options.min_leaves < 2 || options.max_leaves < options.min_leaves)
    throw Error(ErrorCode::kInvalidArgument, "leaf range must satisfy 2 <= min <= max");
  if (static_cast<std::size_t>(options.max_leaves) > kDefaultVariableCap)
    throw Error(ErrorCode::kCapExceeded, "max leaves exceed cap " + std::to_string(kDefaultVariableCap));
  if (options.family == TreeFamily::kCompleteBinary) {
    bool any = false;
    for (int d = 1; (1 << d) <= options.max_leaves; ++d) any = any || (1 << d) >= options.min_leaves;
    if (!any) throw Error(ErrorCode::kInvalidArgument, "no complete binary tree has a leaf count in range");
  }
  const CounterRng master(options.seed);
  const double c = theoremC_constant();
  std::function<ScanRecord(std::size_t)> trial = [&](std::size_t i) {
    ScanRecord r;
    r.trial = i;
    r.seed = master.child_seed(i);
    r.family = std::string(family_name(options.family));
    CounterRng rng(r.seed);
    auto tree = scan_tree(options.family, rng, options.min_leaves, options.max_leaves);
    r.topology_hash = topology_hash(tree);
    r.t = static_cast<int>(tree.leaves().size());
    for (const auto& e : tree.edges()) r.rhos.push_back(e.rho);
    r.lhs = conjectureB_lhs(tree);
    r.bound = c / r.t;
    r.margin = r.bound - r.lhs;
    r.lhs_times_t = r.lhs * r.t;
    r.asserted = options.family == TreeFamily::kSimpleCaterpillar;
    return r;
  };
  return parallel_map<ScanRecord>(options.trials, trial, options.threads);
}

template <NumericField T>
std::string topology_hash(const InfoFlowTree<T>& tree) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  auto feed = [&h](std::int64_t x) {
    for (int b = 0; b < 8; ++b) {
      h ^= static_cast<std::uint64_t>(x >> (8 * b)) & 0xffu;
      h *= 0x100000001b3ULL;
    }
  };
  for (const auto& e : tree.edges()) {
    feed(e.u);
    feed(e.v);
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

#define IFT_INSTANTIATE(T)                                                                    \
  template std::optional<StarSpec<T>> star_spec(const InfoFlowTree<T>&);                      \
  template T star_expected_center_variance(const InfoFlowTree<T>&, std::size_t);              \
  template Spin star_sign_statistic(std::span<const T>, const Assignment&,                    \
                                    std::span<const VertexId>);                               \
  template T star_sign_error_probability(const StarSpec<T>&);                                 \
  template JointDistribution<T> parity_counterexample(int, std::size_t);                      \
  template std::string topology_hash(const InfoFlowTree<T>&);
IFT_INSTANTIATE(Rational)
IFT_INSTANTIATE(double)
#undef IFT_INSTANTIATE

}  // namespace ift
