#include "ift/tree.hpp"

#include <algorithm>
#include <deque>
#include <numeric>
#include <set>
#include <sstream>

namespace ift {

Spin::Spin(int value) : value_(value) {
  if (value != 1 && value != -1)
    throw Error(ErrorCode::kInvalidArgument, "spin must be +1 or -1, got " + std::to_string(value));
}

Assignment::Assignment(std::initializer_list<std::pair<VertexId, int>> values) {
  for (const auto& [label, value] : values) {
    if (contains(label))
      throw Error(ErrorCode::kInvalidArgument, "label " + std::to_string(label) + " assigned twice");
    set(label, value);
  }
}

Spin Assignment::at(VertexId label) const {
  auto it = values_.find(label);
  if (it == values_.end())
    throw Error(ErrorCode::kInvalidArgument, "label " + std::to_string(label) + " not assigned");
  return it->second;
}

std::vector<VertexId> Assignment::labels() const {
  std::vector<VertexId> out;
  out.reserve(values_.size());
  for (const auto& [label, _] : values_) out.push_back(label);
  return out;
}

Assignment Assignment::restricted(const std::vector<VertexId>& keep) const {
  Assignment out;
  for (VertexId label : keep) {
    auto it = values_.find(label);
    if (it != values_.end()) out.set(label, it->second);
  }
  return out;
}

std::string_view violation_kind_name(Violation::Kind kind) {
  using K = Violation::Kind;
  switch (kind) {
    case K::kTooFewVertices: return "too_few_vertices";
    case K::kDuplicateVertex: return "duplicate_vertex";
    case K::kUnknownEndpoint: return "unknown_endpoint";
    case K::kSelfLoop: return "self_loop";
    case K::kCorrelationOutOfRange: return "correlation_out_of_range";
    case K::kCycle: return "cycle";
    case K::kDisconnected: return "disconnected";
    case K::kBadLeafLabel: return "bad_leaf_label";
  }
  return "unknown";
}

template <NumericField T>
InfoFlowTree<T>::InfoFlowTree(std::vector<VertexId> vertices, std::vector<Edge<T>> edges,
                              std::optional<std::vector<VertexId>> leaves)
    : vertices_(std::move(vertices)), edges_(std::move(edges)) {
  for (std::size_t i = 0; i < vertices_.size(); ++i) index_.emplace(vertices_[i], i);
  adjacency_.resize(vertices_.size());
  for (std::size_t e = 0; e < edges_.size(); ++e) {
    auto iu = index_.find(edges_[e].u);
    auto iv = index_.find(edges_[e].v);
    if (iu == index_.end() || iv == index_.end() || edges_[e].u == edges_[e].v) continue;
    adjacency_[iu->second].push_back({edges_[e].v, e});
    adjacency_[iv->second].push_back({edges_[e].u, e});
  }
  if (leaves) {
    leaves_ = std::move(*leaves);
  } else {
    for (std::size_t i = 0; i < vertices_.size(); ++i)
      if (adjacency_[i].size() == 1) leaves_.push_back(vertices_[i]);
  }
}

template <NumericField T>
std::size_t InfoFlowTree<T>::index_of(VertexId v) const {
  auto it = index_.find(v);
  if (it == index_.end())
    throw Error(ErrorCode::kInvalidArgument, "unknown vertex " + std::to_string(v));
  return it->second;
}

template <NumericField T>
bool InfoFlowTree<T>::is_leaf(VertexId v) const {
  return std::find(leaves_.begin(), leaves_.end(), v) != leaves_.end();
}

template <NumericField T>
std::vector<VertexId> InfoFlowTree<T>::internal_vertices() const {
  std::vector<VertexId> out;
  for (VertexId v : vertices_)
    if (!is_leaf(v)) out.push_back(v);
  return out;
}

template <NumericField T>
const std::vector<typename InfoFlowTree<T>::Neighbor>& InfoFlowTree<T>::neighbors(VertexId v) const {
  return adjacency_[index_of(v)];
}

template <NumericField T>
std::optional<std::size_t> InfoFlowTree<T>::edge_between(VertexId u, VertexId v) const {
  for (const auto& n : neighbors(u))
    if (n.vertex == v) return n.edge;
  return std::nullopt;
}

template <NumericField T>
const T& InfoFlowTree<T>::rho(VertexId u, VertexId v) const {
  auto e = edge_between(u, v);
  if (!e)
    throw Error(ErrorCode::kInvalidArgument,
                "no edge between " + std::to_string(u) + " and " + std::to_string(v));
  return edges_[*e].rho;
}

template <NumericField T>
std::vector<VertexId> InfoFlowTree<T>::path(VertexId u, VertexId v) const {
  index_of(v);
  std::map<VertexId, VertexId> parent;
  for (const auto& [w, p] : bfs_order(*this, u)) parent[w] = p;
  if (!parent.count(v))
    throw Error(ErrorCode::kInvalidTree,
                "no path between " + std::to_string(u) + " and " + std::to_string(v));
  std::vector<VertexId> out{v};
  while (out.back() != u) out.push_back(parent.at(out.back()));
  std::reverse(out.begin(), out.end());
  return out;
}

template <NumericField T>
VertexId InfoFlowTree<T>::root() const {
  if (vertices_.empty()) throw Error(ErrorCode::kInvalidTree, "empty tree");
  return *std::min_element(vertices_.begin(), vertices_.end());
}

template <NumericField T>
VertexId InfoFlowTree<T>::max_id() const {
  if (vertices_.empty()) throw Error(ErrorCode::kInvalidTree, "empty tree");
  return *std::max_element(vertices_.begin(), vertices_.end());
}

template <NumericField T>
std::vector<Violation> validate(const InfoFlowTree<T>& tree) {
  using K = Violation::Kind;
  std::vector<Violation> out;
  const auto& vs = tree.vertices();
  if (vs.size() < 2)
    out.push_back({K::kTooFewVertices, "an information flow tree needs |V| > 1, got " +
                                           std::to_string(vs.size())});

  std::set<VertexId> seen;
  for (VertexId v : vs)
    if (!seen.insert(v).second)
      out.push_back({K::kDuplicateVertex, "vertex id " + std::to_string(v) + " repeated"});

  const T one = Field<T>::from_ratio(1, 1);
  const T minus_one = Field<T>::from_ratio(-1, 1);
  std::map<VertexId, VertexId> uf;
  for (VertexId v : seen) uf[v] = v;
  auto find = [&](VertexId x) {
    while (uf[x] != x) x = uf[x] = uf[uf[x]];
    return x;
  };
  bool cycle = false;
  for (std::size_t e = 0; e < tree.edges().size(); ++e) {
    const auto& edge = tree.edges()[e];
    std::string name = "edge " + std::to_string(e) + " (" + std::to_string(edge.u) + ", " +
                       std::to_string(edge.v) + ")";
    if (edge.rho < minus_one || one < edge.rho)
      out.push_back({K::kCorrelationOutOfRange,
                     name + ": correlation " + Field<T>::to_string(edge.rho) + " outside [-1, 1]"});
    if constexpr (!Field<T>::kExact) {
      if (std::isnan(edge.rho))
        out.push_back({K::kCorrelationOutOfRange, name + ": correlation is NaN"});
    }
    if (!seen.count(edge.u) || !seen.count(edge.v)) {
      out.push_back({K::kUnknownEndpoint, name + ": endpoint is not a vertex"});
      continue;
    }
    if (edge.u == edge.v) {
      out.push_back({K::kSelfLoop, name + ": self loop"});
      continue;
    }
    VertexId a = find(edge.u), b = find(edge.v);
    if (a == b) {
      if (!cycle) out.push_back({K::kCycle, name + " closes a cycle"});
      cycle = true;
    } else {
      uf[a] = b;
    }
  }
  std::set<VertexId> roots;
  for (VertexId v : seen) roots.insert(find(v));
  if (roots.size() > 1)
    out.push_back({K::kDisconnected,
                   "graph has " + std::to_string(roots.size()) + " connected components"});

  std::set<VertexId> leaf_seen;
  for (VertexId l : tree.leaves()) {
    if (!leaf_seen.insert(l).second) {
      out.push_back({K::kBadLeafLabel, "leaf " + std::to_string(l) + " listed twice"});
    } else if (!seen.count(l)) {
      out.push_back({K::kBadLeafLabel, "leaf " + std::to_string(l) + " is not a vertex"});
    } else if (tree.degree(l) != 1) {
      out.push_back({K::kBadLeafLabel, "leaf " + std::to_string(l) + " has degree " +
                                           std::to_string(tree.degree(l)) + ", expected 1"});
    }
  }
  return out;
}

template <NumericField T>
void require_valid(const InfoFlowTree<T>& tree) {
  auto violations = validate(tree);
  if (violations.empty()) return;
  std::ostringstream msg;
  msg << "invalid tree:";
  for (const auto& v : violations) msg << " [" << violation_kind_name(v.kind) << "] " << v.message << ";";
  throw Error(ErrorCode::kInvalidTree, msg.str());
}

template <NumericField T>
std::vector<std::pair<VertexId, VertexId>> bfs_order(const InfoFlowTree<T>& tree, VertexId root,
                                                     const std::vector<VertexId>& blocked) {
  std::vector<std::pair<VertexId, VertexId>> order;
  std::set<VertexId> visited{root};
  for (VertexId b : blocked) visited.insert(b);
  std::deque<std::pair<VertexId, VertexId>> queue{{root, root}};
  while (!queue.empty()) {
    auto [v, p] = queue.front();
    queue.pop_front();
    order.emplace_back(v, p);
    for (const auto& n : tree.neighbors(v)) {
      if (visited.insert(n.vertex).second) queue.emplace_back(n.vertex, v);
    }
  }
  return order;
}

InfoFlowTree<double> to_float(const InfoFlowTree<Rational>& tree) {
  std::vector<Edge<double>> edges;
  edges.reserve(tree.edges().size());
  for (const auto& e : tree.edges()) edges.push_back({e.u, e.v, e.rho.get_d()});
  return InfoFlowTree<double>(tree.vertices(), std::move(edges), tree.leaves());
}

#define IFT_INSTANTIATE(T)                                                                   \
  template class InfoFlowTree<T>;                                                            \
  template std::vector<Violation> validate(const InfoFlowTree<T>&);                          \
  template void require_valid(const InfoFlowTree<T>&);                                       \
  template std::vector<std::pair<VertexId, VertexId>> bfs_order(const InfoFlowTree<T>&,      \
                                                                VertexId,                    \
                                                                const std::vector<VertexId>&);
IFT_INSTANTIATE(Rational)
IFT_INSTANTIATE(double)
#undef IFT_INSTANTIATE

}  // namespace ift
