#include "ift/covariance.hpp"

#include <algorithm>
#include <array>
#include <optional>
#include <set>

namespace ift {

namespace {

template <NumericField T>
std::optional<FormulaValue<T>> evaluate(std::span<const T> rhos,
                                        std::span<const EventLikelihood<T>> lambdas) {
  if (lambdas.empty() || rhos.size() + 1 != lambdas.size())
    throw Error(ErrorCode::kInvalidArgument, "need m likelihood pairs and m - 1 spine correlations");
  // Forward pass: alpha[s] = Pr[L_1..L_i, X_i = s].
  const T h = half<T>();
  std::array<T, 2> alpha{T(h * lambdas[0].plus), T(h * lambdas[0].minus)};
  for (std::size_t i = 1; i < lambdas.size(); ++i) {
    const T keep = edge_transition(rhos[i - 1], +1);
    const T flip = edge_transition(rhos[i - 1], -1);
    std::array<T, 2> next{T(alpha[0] * keep + alpha[1] * flip), T(alpha[0] * flip + alpha[1] * keep)};
    next[0] *= lambdas[i].plus;
    next[1] *= lambdas[i].minus;
    alpha = std::move(next);
  }
  T prob = alpha[0] + alpha[1];
  if (prob == Field<T>::from_ratio(0, 1)) return std::nullopt;
  T numerator = Field<T>::from_ratio(1, 1);
  for (const T& r : rhos) numerator *= r;
  for (const auto& l : lambdas) numerator *= l.plus * l.minus;
  return FormulaValue<T>{T(numerator / (prob * prob)), prob};
}

// Every label of `outcome` must be a leaf of some hanging subtree.
template <NumericField T>
void check_outcome_labels(const PathDecomposition<T>& decomp, const Assignment& outcome) {
  std::set<VertexId> known;
  for (const auto& leaves : decomp.hanging_leaves) known.insert(leaves.begin(), leaves.end());
  for (const auto& [label, _] : outcome)
    if (!known.count(label))
      throw Error(ErrorCode::kInvalidArgument, "outcome label " + std::to_string(label) + " is not a leaf");
}

}  // namespace

template <NumericField T>
PathDecomposition<T> decompose_path(const InfoFlowTree<T>& tree, VertexId u, VertexId v) {
  require_valid(tree);
  PathDecomposition<T> d;
  d.tree = tree;
  d.path = tree.path(u, v);
  const std::size_t m = d.path.size();
  for (std::size_t i = 0; i + 1 < m; ++i) d.spine_correlations.push_back(tree.rho(d.path[i], d.path[i + 1]));
  for (std::size_t i = 0; i < m; ++i) {
    SubtreeRef ref{d.path[i], {}};
    if (i > 0) ref.blocked.push_back(d.path[i - 1]);
    if (i + 1 < m) ref.blocked.push_back(d.path[i + 1]);
    d.hanging_leaves.push_back(subtree_leaves(tree, ref));
    d.hanging.push_back(std::move(ref));
  }
  return d;
}

template <NumericField T>
std::vector<Assignment> split_events(const PathDecomposition<T>& decomp, const Assignment& outcome) {
  check_outcome_labels(decomp, outcome);
  std::vector<Assignment> events;
  for (const auto& leaves : decomp.hanging_leaves) events.push_back(outcome.restricted(leaves));
  return events;
}

template <NumericField T>
T path_covariance(const InfoFlowTree<T>& tree, VertexId u, VertexId v) {
  require_valid(tree);
  if (u == v) throw Error(ErrorCode::kInvalidArgument, "path covariance needs distinct vertices");
  auto path = tree.path(u, v);
  T product = Field<T>::from_ratio(1, 1);
  for (std::size_t i = 0; i + 1 < path.size(); ++i) product *= tree.rho(path[i], path[i + 1]);
  return product;
}

template <NumericField T>
FormulaValue<T> conditional_covariance_from_likelihoods(std::span<const T> spine_correlations,
                                                        std::span<const EventLikelihood<T>> likelihoods) {
  auto value = evaluate(spine_correlations, likelihoods);
  if (!value) throw Error(ErrorCode::kZeroProbability, "conditioning event has probability 0");
  return *value;
}

template <NumericField T>
std::vector<EventLikelihood<T>> event_likelihoods(const PathDecomposition<T>& decomp,
                                                  const std::vector<Assignment>& events) {
  if (events.size() != decomp.length())
    throw Error(ErrorCode::kInvalidArgument, "need one event per path vertex");
  std::vector<EventLikelihood<T>> out;
  out.reserve(events.size());
  for (std::size_t i = 0; i < events.size(); ++i) {
    out.push_back({subtree_event_prob(decomp.tree, decomp.hanging[i], events[i], Spin(1)),
                   subtree_event_prob(decomp.tree, decomp.hanging[i], events[i], Spin(-1))});
  }
  return out;
}

template <NumericField T>
FormulaValue<T> conditional_covariance_formula_with_probability(
    const PathDecomposition<T>& decomp, const std::vector<Assignment>& events) {
  auto lambdas = event_likelihoods(decomp, events);
  return conditional_covariance_from_likelihoods<T>(decomp.spine_correlations, lambdas);
}

template <NumericField T>
T conditional_covariance_formula(const PathDecomposition<T>& decomp,
                                 const std::vector<Assignment>& events) {
  return conditional_covariance_formula_with_probability(decomp, events).covariance;
}

template <NumericField T>
std::vector<std::optional<T>> conditional_covariance_ratio_all(const PathDecomposition<T>& decomp,
                                                               const std::vector<Assignment>& events) {
  if (events.size() != decomp.length())
    throw Error(ErrorCode::kInvalidArgument, "need one event per path vertex");
  Assignment event;
  for (const auto& e : events)
    for (const auto& [label, spin] : e) event.set(label, spin);
  check_outcome_labels(decomp, event);

  // Table over the path vertices (low bits) and the remaining event leaves.
  std::vector<VertexId> observed = decomp.path;
  for (VertexId l : event.labels())
    if (std::find(observed.begin(), observed.end(), l) == observed.end()) observed.push_back(l);
  const auto joint = joint_distribution(decomp.tree, observed, observed.size());
  const std::size_t m = decomp.path.size();
  const std::size_t path_mask = (std::size_t{1} << m) - 1;
  std::size_t mask = 0, want = 0;
  for (const auto& [label, spin] : event) {
    const std::size_t k = joint.position(label);
    mask |= std::size_t{1} << k;
    want |= std::size_t{spin.bit()} << k;
  }

  const T zero = Field<T>::from_ratio(0, 1);
  std::vector<T> p_x(path_mask + 1, zero), p_x_event(path_mask + 1, zero);
  T p_event = zero;
  for (std::size_t i = 0; i < joint.size(); ++i) {
    p_x[i & path_mask] += joint[i];
    if ((i & mask) == want) {
      p_x_event[i & path_mask] += joint[i];
      p_event += joint[i];
    }
  }
  if (p_event == zero) throw Error(ErrorCode::kZeroProbability, "conditioning event has probability 0");

  T product = Field<T>::from_ratio(1, 1);
  for (const T& r : decomp.spine_correlations) product *= r;
  std::vector<std::optional<T>> out(path_mask + 1);
  for (std::size_t x = 0; x <= path_mask; ++x) {
    const std::size_t neg = x ^ path_mask;
    if (p_x[x] == zero || p_x[neg] == zero) continue;
    out[x] = product * (p_x_event[x] / p_event / p_x[x]) * (p_x_event[neg] / p_event / p_x[neg]);
  }
  return out;
}

template <NumericField T>
T conditional_covariance_ratio(const PathDecomposition<T>& decomp,
                               const std::vector<Assignment>& events, const Assignment& x) {
  if (x.size() != decomp.path.size())
    throw Error(ErrorCode::kInvalidArgument, "x must assign exactly the path vertices");
  std::size_t bits = 0;
  for (std::size_t k = 0; k < decomp.path.size(); ++k) {
    if (!x.contains(decomp.path[k]))
      throw Error(ErrorCode::kInvalidArgument, "x must assign exactly the path vertices");
    bits |= std::size_t{x.at(decomp.path[k]).bit()} << k;
  }
  auto all = conditional_covariance_ratio_all(decomp, events);
  if (!all[bits]) throw Error(ErrorCode::kZeroProbability, "path assignment x or -x has probability 0");
  return *all[bits];
}

template <NumericField T>
T conditional_covariance_bruteforce(const InfoFlowTree<T>& tree, VertexId u, VertexId v,
                                    const Assignment& outcome, std::size_t vertex_cap) {
  auto dist = vertex_distribution_bruteforce(tree, vertex_cap);
  std::size_t pu = dist.position(u), pv = dist.position(v);
  std::size_t mask = 0, want = 0;
  for (const auto& [label, spin] : outcome) {
    std::size_t k = dist.position(label);
    mask |= std::size_t{1} << k;
    want |= std::size_t{spin.bit()} << k;
  }
  const T zero = Field<T>::from_ratio(0, 1);
  T z = zero, exy = zero, ex = zero, ey = zero;
  for (std::size_t i = 0; i < dist.size(); ++i) {
    if ((i & mask) != want) continue;
    const T& p = dist[i];
    int xu = ((i >> pu) & 1u) ? -1 : 1;
    int xv = ((i >> pv) & 1u) ? -1 : 1;
    z += p;
    if (xu * xv > 0) exy += p; else exy -= p;
    if (xu > 0) ex += p; else ex -= p;
    if (xv > 0) ey += p; else ey -= p;
  }
  if (z == zero) throw Error(ErrorCode::kZeroProbability, "outcome has probability 0");
  return exy / z - (ex / z) * (ey / z);
}

template <NumericField T>
CondCovReport<T> expected_abs_cond_cov(const InfoFlowTree<T>& tree, VertexId u, VertexId v,
                                       const std::vector<VertexId>& conditioning_leaves,
                                       std::size_t cap) {
  require_valid(tree);
  if (conditioning_leaves.size() > cap)
    throw Error(ErrorCode::kCapExceeded, std::to_string(conditioning_leaves.size()) +
                                             " conditioning leaves exceed cap " + std::to_string(cap));
  std::set<VertexId> seen;
  for (VertexId l : conditioning_leaves) {
    if (l == u || l == v)
      throw Error(ErrorCode::kInvalidArgument,
                  "vertex " + std::to_string(l) + " is both measured and conditioned on");
    if (!tree.has_vertex(l) || !tree.is_leaf(l))
      throw Error(ErrorCode::kInvalidArgument, "conditioning vertex " + std::to_string(l) + " is not a leaf");
    if (!seen.insert(l).second)
      throw Error(ErrorCode::kInvalidArgument, "conditioning leaf " + std::to_string(l) + " repeated");
  }

  CondCovReport<T> report;
  report.u = u;
  report.v = v;
  report.conditioning = conditioning_leaves;
  report.expectation = Field<T>::from_ratio(0, 1);
  auto decomp = decompose_path(tree, u, v);
  const std::size_t k = conditioning_leaves.size();
  for (std::size_t index = 0; index < (std::size_t{1} << k); ++index) {
    Assignment outcome;
    for (std::size_t j = 0; j < k; ++j) outcome.set(conditioning_leaves[j], Spin::from_bit((index >> j) & 1u));
    auto lambdas = event_likelihoods(decomp, split_events(decomp, outcome));
    auto value = evaluate<T>(decomp.spine_correlations, lambdas);
    if (!value) continue;
    report.expectation += value->event_probability * Field<T>::abs(value->covariance);
    report.outcomes.push_back({std::move(outcome), value->event_probability, value->covariance});
  }
  return report;
}

#define IFT_INSTANTIATE(T)                                                                          \
  template PathDecomposition<T> decompose_path(const InfoFlowTree<T>&, VertexId, VertexId);         \
  template std::vector<Assignment> split_events(const PathDecomposition<T>&, const Assignment&);     \
  template T path_covariance(const InfoFlowTree<T>&, VertexId, VertexId);                           \
  template FormulaValue<T> conditional_covariance_from_likelihoods(std::span<const T>,              \
                                                                   std::span<const EventLikelihood<T>>); \
  template std::vector<EventLikelihood<T>> event_likelihoods(const PathDecomposition<T>&,           \
                                                             const std::vector<Assignment>&);       \
  template FormulaValue<T> conditional_covariance_formula_with_probability(                         \
      const PathDecomposition<T>&, const std::vector<Assignment>&);                                 \
  template T conditional_covariance_formula(const PathDecomposition<T>&,                            \
                                            const std::vector<Assignment>&);                        \
  template std::vector<std::optional<T>> conditional_covariance_ratio_all(                          \
      const PathDecomposition<T>&, const std::vector<Assignment>&);                                 \
  template T conditional_covariance_ratio(const PathDecomposition<T>&,                              \
                                          const std::vector<Assignment>&, const Assignment&);       \
  template T conditional_covariance_bruteforce(const InfoFlowTree<T>&, VertexId, VertexId,         \
                                               const Assignment&, std::size_t);                     \
  template CondCovReport<T> expected_abs_cond_cov(const InfoFlowTree<T>&, VertexId, VertexId,       \
                                                  const std::vector<VertexId>&, std::size_t);
IFT_INSTANTIATE(Rational)
IFT_INSTANTIATE(double)
#undef IFT_INSTANTIATE

}  // namespace ift
