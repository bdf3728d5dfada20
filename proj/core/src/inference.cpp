#include "ift/inference.hpp"

#include <algorithm>
#include <array>
#include <map>
#include <set>

#include "ift/rng.hpp"

namespace ift {

namespace {

// Table over the observed variables of a subtree, conditioned on the value
// of the subtree's root (index 0: +1, index 1: -1).
template <NumericField T>
struct Factor {
  std::vector<VertexId> labels;
  std::array<std::vector<T>, 2> given;
};

template <NumericField T>
std::map<VertexId, std::vector<VertexId>> children_of(
    const std::vector<std::pair<VertexId, VertexId>>& order) {
  std::map<VertexId, std::vector<VertexId>> children;
  for (const auto& [v, p] : order) {
    children[v];
    if (v != p) children[p].push_back(v);
  }
  return children;
}

}  // namespace

template <NumericField T>
JointDistribution<T> joint_distribution(const InfoFlowTree<T>& tree,
                                        const std::vector<VertexId>& observed, std::size_t cap) {
  require_valid(tree);
  if (observed.size() > cap)
    throw Error(ErrorCode::kCapExceeded, std::to_string(observed.size()) +
                                             " observed variables exceed cap " + std::to_string(cap));
  std::set<VertexId> obs;
  for (VertexId v : observed) {
    if (!tree.has_vertex(v))
      throw Error(ErrorCode::kInvalidArgument, "unknown vertex " + std::to_string(v));
    if (!obs.insert(v).second)
      throw Error(ErrorCode::kInvalidArgument, "vertex " + std::to_string(v) + " observed twice");
  }

  const T zero = Field<T>::from_ratio(0, 1);
  const T one = Field<T>::from_ratio(1, 1);
  auto order = bfs_order(tree, tree.root());
  auto children = children_of<T>(order);
  std::map<VertexId, Factor<T>> done;

  for (auto it = order.rbegin(); it != order.rend(); ++it) {
    VertexId v = it->first;
    Factor<T> f;
    if (obs.count(v)) {
      f.labels = {v};
      f.given[0] = {one, zero};
      f.given[1] = {zero, one};
    } else {
      f.given[0] = {one};
      f.given[1] = {one};
    }
    for (VertexId c : children[v]) {
      Factor<T>& child = done.at(c);
      const T& rho = tree.rho(v, c);
      const T keep = edge_transition(rho, +1);
      const T flip = edge_transition(rho, -1);
      const std::size_t width = f.given[0].size();
      const std::size_t child_width = child.given[0].size();
      std::array<std::vector<T>, 2> merged;
      for (int s = 0; s < 2; ++s) {
        std::vector<T> pushed(child_width);
        for (std::size_t j = 0; j < child_width; ++j)
          pushed[j] = keep * child.given[s][j] + flip * child.given[1 - s][j];
        merged[s].resize(width * child_width);
        for (std::size_t j = 0; j < child_width; ++j)
          for (std::size_t i = 0; i < width; ++i) merged[s][i + j * width] = f.given[s][i] * pushed[j];
      }
      f.given = std::move(merged);
      f.labels.insert(f.labels.end(), child.labels.begin(), child.labels.end());
      done.erase(c);
    }
    done.emplace(v, std::move(f));
  }

  Factor<T>& top = done.at(tree.root());
  const T h = half<T>();
  std::vector<T> probs(top.given[0].size());
  for (std::size_t i = 0; i < probs.size(); ++i) probs[i] = h * (top.given[0][i] + top.given[1][i]);
  return JointDistribution<T>::unchecked(top.labels, std::move(probs)).reordered(observed);
}

template <NumericField T>
JointDistribution<T> leaf_distribution(const InfoFlowTree<T>& tree, std::size_t cap) {
  return joint_distribution(tree, tree.leaves(), cap);
}

template <NumericField T>
JointDistribution<T> vertex_distribution_bruteforce(const InfoFlowTree<T>& tree,
                                                    std::size_t vertex_cap) {
  require_valid(tree);
  const auto& vs = tree.vertices();
  if (vs.size() > vertex_cap)
    throw Error(ErrorCode::kCapExceeded, "brute force over " + std::to_string(vs.size()) +
                                             " vertices exceeds cap " + std::to_string(vertex_cap));
  std::map<VertexId, std::size_t> pos;
  for (std::size_t k = 0; k < vs.size(); ++k) pos[vs[k]] = k;

  struct EdgeTerm {
    std::size_t a, b;
    T agree, disagree;
  };
  std::vector<EdgeTerm> terms;
  for (const auto& e : tree.edges())
    terms.push_back({pos[e.u], pos[e.v], edge_transition(e.rho, +1), edge_transition(e.rho, -1)});

  const T h = half<T>();
  std::vector<T> probs(std::size_t{1} << vs.size());
  for (std::size_t x = 0; x < probs.size(); ++x) {
    T w = h;
    for (const auto& term : terms) {
      bool same = ((x >> term.a) & 1u) == ((x >> term.b) & 1u);
      w *= same ? term.agree : term.disagree;
    }
    probs[x] = w;
  }
  return JointDistribution<T>::unchecked(vs, std::move(probs));
}

template <NumericField T>
JointDistribution<T> leaf_distribution_bruteforce(const InfoFlowTree<T>& tree,
                                                  std::size_t vertex_cap) {
  return vertex_distribution_bruteforce(tree, vertex_cap).marginal(tree.leaves());
}

template <NumericField T>
std::vector<VertexId> subtree_leaves(const InfoFlowTree<T>& tree, const SubtreeRef& subtree) {
  std::vector<VertexId> out;
  for (const auto& [v, _] : bfs_order(tree, subtree.root, subtree.blocked))
    if (tree.is_leaf(v)) out.push_back(v);
  return out;
}

template <NumericField T>
T subtree_event_prob(const InfoFlowTree<T>& tree, const SubtreeRef& subtree,
                     const Assignment& outcome, Spin root_value) {
  require_valid(tree);
  if (!tree.has_vertex(subtree.root))
    throw Error(ErrorCode::kInvalidArgument, "unknown subtree root " + std::to_string(subtree.root));
  auto order = bfs_order(tree, subtree.root, subtree.blocked);
  std::set<VertexId> leaves;
  for (const auto& [v, _] : order)
    if (tree.is_leaf(v)) leaves.insert(v);
  for (const auto& [label, _] : outcome)
    if (!leaves.count(label))
      throw Error(ErrorCode::kInvalidArgument,
                  "outcome label " + std::to_string(label) + " is not a leaf of the subtree at " +
                      std::to_string(subtree.root));

  auto children = children_of<T>(order);
  const T zero = Field<T>::from_ratio(0, 1);
  const T one = Field<T>::from_ratio(1, 1);
  std::map<VertexId, std::array<T, 2>> message;
  for (auto it = order.rbegin(); it != order.rend(); ++it) {
    VertexId v = it->first;
    std::array<T, 2> m{one, one};
    if (outcome.contains(v)) {
      unsigned b = outcome.at(v).bit();
      m[b] = one;
      m[1 - b] = zero;
    }
    for (VertexId c : children[v]) {
      const auto& mc = message.at(c);
      const T& rho = tree.rho(v, c);
      const T keep = edge_transition(rho, +1);
      const T flip = edge_transition(rho, -1);
      for (int s = 0; s < 2; ++s) m[s] *= keep * mc[s] + flip * mc[1 - s];
      message.erase(c);
    }
    message.emplace(v, std::move(m));
  }
  return message.at(subtree.root)[root_value.bit()];
}

template <NumericField T>
T subtree_event_prob(const InfoFlowTree<T>& tree, VertexId root, const Assignment& outcome,
                     Spin root_value) {
  return subtree_event_prob(tree, SubtreeRef{root, {}}, outcome, root_value);
}

template <NumericField T>
Sample sample(const InfoFlowTree<T>& tree, std::uint64_t seed) {
  require_valid(tree);
  CounterRng rng(seed);
  Sample out;
  out.seed = seed;
  for (const auto& [v, p] : bfs_order(tree, tree.root())) {
    if (v == p) {
      out.vertices.set(v, Spin(rng.uniform01() < 0.5 ? 1 : -1));
      continue;
    }
    double keep = Field<T>::to_double(edge_transition(tree.rho(p, v), +1));
    Spin parent = out.vertices.at(p);
    out.vertices.set(v, rng.uniform01() < keep ? parent : -parent);
  }
  out.edges.reserve(tree.edges().size());
  for (const auto& e : tree.edges())
    out.edges.push_back(Spin(out.vertices.at(e.u).value() * out.vertices.at(e.v).value()));
  return out;
}

#define IFT_INSTANTIATE(T)                                                                        \
  template JointDistribution<T> joint_distribution(const InfoFlowTree<T>&,                        \
                                                   const std::vector<VertexId>&, std::size_t);    \
  template JointDistribution<T> leaf_distribution(const InfoFlowTree<T>&, std::size_t);           \
  template JointDistribution<T> vertex_distribution_bruteforce(const InfoFlowTree<T>&,            \
                                                               std::size_t);                      \
  template JointDistribution<T> leaf_distribution_bruteforce(const InfoFlowTree<T>&, std::size_t); \
  template std::vector<VertexId> subtree_leaves(const InfoFlowTree<T>&, const SubtreeRef&);       \
  template T subtree_event_prob(const InfoFlowTree<T>&, const SubtreeRef&, const Assignment&,     \
                                Spin);                                                            \
  template T subtree_event_prob(const InfoFlowTree<T>&, VertexId, const Assignment&, Spin);       \
  template Sample sample(const InfoFlowTree<T>&, std::uint64_t);
IFT_INSTANTIATE(Rational)
IFT_INSTANTIATE(double)
#undef IFT_INSTANTIATE

}  // namespace ift
