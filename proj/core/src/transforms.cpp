#include "ift/transforms.hpp"

#include <algorithm>
#include <set>

#include "ift/inference.hpp"

namespace ift {

namespace {

struct RuleName {
  Rule rule;
  std::string_view name;
};

constexpr RuleName kRuleNames[] = {
    {Rule::kNegateInternalVertex, "negate"},
    {Rule::kNormalizeInternalSigns, "normalize-signs"},
    {Rule::kMergeDegree2, "merge"},
    {Rule::kSplitEdge, "split-edge"},
    {Rule::kContractUnitSubgraph, "contract"},
    {Rule::kSplitVertex, "split-vertex"},
    {Rule::kToBinary, "binary"},
    {Rule::kToSimpleCaterpillar, "simple-caterpillar"},
    {Rule::kPruneHiddenPendant, "prune"},
};

[[noreturn]] void precondition(const std::string& message) {
  throw Error(ErrorCode::kPrecondition, message);
}

std::string id(VertexId v) { return std::to_string(v); }

template <NumericField T>
bool is_one(const T& x) {
  return Field<T>::equal(x, Field<T>::from_ratio(1, 1));
}

template <NumericField T>
void require_vertex(const InfoFlowTree<T>& tree, VertexId v) {
  if (!tree.has_vertex(v)) throw Error(ErrorCode::kInvalidArgument, "unknown vertex " + id(v));
}

template <NumericField T>
std::vector<EdgeCorrelation<T>> edges_touching(const InfoFlowTree<T>& tree,
                                               const std::set<VertexId>& vertices) {
  std::vector<EdgeCorrelation<T>> out;
  for (const auto& e : tree.edges())
    if (vertices.count(e.u) || vertices.count(e.v)) out.push_back({e.u, e.v, e.rho});
  return out;
}

// Executes `request` on `cur`, completing the step's generated ids and its
// before/after correlation record.
template <NumericField T>
TransformStep<T> run_step(InfoFlowTree<T>& cur, TransformStep<T> request) {
  InfoFlowTree<T> next = apply_step(cur, request);
  std::set<VertexId> touched(request.vertices.begin(), request.vertices.end());
  if (request.rule == Rule::kSplitEdge && request.vertices.size() == 2) {
    request.vertices.push_back(cur.max_id() + 1);
    touched.insert(request.vertices.back());
  }
  if (request.rule == Rule::kSplitVertex) {
    for (VertexId v : next.vertices())
      if (!cur.has_vertex(v)) {
        request.vertices.push_back(v);
        touched.insert(v);
      }
  }
  request.before = edges_touching(cur, touched);
  request.after = edges_touching(next, touched);
  cur = std::move(next);
  return request;
}

template <NumericField T>
void push(InfoFlowTree<T>& cur, TransformTrace<T>& trace, TransformStep<T> request) {
  trace.steps.push_back(run_step(cur, std::move(request)));
}

template <NumericField T>
const EdgeCorrelation<T>* find_edge(const std::vector<EdgeCorrelation<T>>& edges, VertexId a,
                                    VertexId b) {
  for (const auto& e : edges)
    if ((e.u == a && e.v == b) || (e.u == b && e.v == a)) return &e;
  return nullptr;
}

template <NumericField T>
std::vector<VertexId> leaf_neighbors(const InfoFlowTree<T>& tree, VertexId v) {
  std::vector<VertexId> out;
  for (const auto& n : tree.neighbors(v))
    if (tree.is_leaf(n.vertex)) out.push_back(n.vertex);
  std::sort(out.begin(), out.end());
  return out;
}

template <NumericField T>
std::optional<VertexId> hidden_pendant(const InfoFlowTree<T>& tree) {
  if (tree.vertex_count() <= 2) return std::nullopt;
  for (VertexId v : tree.vertices())
    if (tree.degree(v) == 1 && !tree.is_leaf(v)) return v;
  return std::nullopt;
}

}  // namespace

std::string_view rule_name(Rule rule) {
  for (const auto& r : kRuleNames)
    if (r.rule == rule) return r.name;
  return "unknown";
}

Rule parse_rule(std::string_view name) {
  for (const auto& r : kRuleNames)
    if (r.name == name) return r.rule;
  throw Error(ErrorCode::kInvalidArgument, "unknown transform rule '" + std::string(name) + "'");
}

template <NumericField T>
InfoFlowTree<T> negate_internal_vertex(const InfoFlowTree<T>& tree, VertexId w) {
  require_valid(tree);
  require_vertex(tree, w);
  if (tree.is_leaf(w)) precondition("negate: vertex " + id(w) + " is a leaf");
  auto edges = tree.edges();
  for (auto& e : edges)
    if (e.u == w || e.v == w) e.rho = -e.rho;
  return InfoFlowTree<T>(tree.vertices(), std::move(edges), tree.leaves());
}

template <NumericField T>
TransformResult<T> normalize_internal_signs(const InfoFlowTree<T>& tree) {
  require_valid(tree);
  TransformResult<T> result{tree, {}};
  const T zero = Field<T>::from_ratio(0, 1);
  // BFS order visits vertices by nondecreasing distance from the root, and
  // negating w only touches w's own edges, so each parent edge is final by
  // the time its child is inspected.
  for (const auto& [w, parent] : bfs_order(tree, tree.root())) {
    if (w == parent || tree.is_leaf(w)) continue;
    if (result.tree.rho(parent, w) < zero)
      push(result.tree, result.trace, TransformStep<T>{Rule::kNegateInternalVertex, {w}, {}, {}, {}});
  }
  return result;
}

template <NumericField T>
InfoFlowTree<T> merge_degree2(const InfoFlowTree<T>& tree, VertexId v) {
  require_valid(tree);
  require_vertex(tree, v);
  if (tree.is_leaf(v)) precondition("merge: vertex " + id(v) + " is a leaf");
  if (tree.degree(v) != 2)
    precondition("merge: vertex " + id(v) + " has degree " + std::to_string(tree.degree(v)));
  auto n = tree.neighbors(v);
  if (n[1].edge < n[0].edge) std::swap(n[0], n[1]);
  const auto& e1 = tree.edges()[n[0].edge];
  const auto& e2 = tree.edges()[n[1].edge];
  std::vector<Edge<T>> edges;
  for (std::size_t i = 0; i < tree.edges().size(); ++i) {
    if (i == n[0].edge) {
      edges.push_back({n[0].vertex, n[1].vertex, T(e1.rho * e2.rho)});
    } else if (i != n[1].edge) {
      edges.push_back(tree.edges()[i]);
    }
  }
  std::vector<VertexId> vertices;
  for (VertexId u : tree.vertices())
    if (u != v) vertices.push_back(u);
  return InfoFlowTree<T>(std::move(vertices), std::move(edges), tree.leaves());
}

template <NumericField T>
InfoFlowTree<T> split_edge(const InfoFlowTree<T>& tree, VertexId u, VertexId v, const T& rho1,
                           const T& rho2) {
  require_valid(tree);
  auto e = tree.edge_between(u, v);
  if (!e) throw Error(ErrorCode::kInvalidArgument, "split-edge: no edge (" + id(u) + ", " + id(v) + ")");
  const T one = Field<T>::from_ratio(1, 1);
  for (const T* r : {&rho1, &rho2})
    if (*r < T(-one) || one < *r)
      throw Error(ErrorCode::kInvalidArgument, "split-edge: factor " + Field<T>::to_string(*r) +
                                                   " outside [-1, 1]");
  const T& rho = tree.edges()[*e].rho;
  if (!Field<T>::equal(T(rho1 * rho2), rho))
    throw Error(ErrorCode::kInvalidArgument,
                "split-edge: " + Field<T>::to_string(rho1) + " * " + Field<T>::to_string(rho2) +
                    " != " + Field<T>::to_string(rho));
  VertexId w = tree.max_id() + 1;
  std::vector<Edge<T>> edges;
  for (std::size_t i = 0; i < tree.edges().size(); ++i) {
    if (i == *e) {
      edges.push_back({u, w, rho1});
      edges.push_back({w, v, rho2});
    } else {
      edges.push_back(tree.edges()[i]);
    }
  }
  auto vertices = tree.vertices();
  vertices.push_back(w);
  return InfoFlowTree<T>(std::move(vertices), std::move(edges), tree.leaves());
}

template <NumericField T>
InfoFlowTree<T> contract_unit_subgraph(const InfoFlowTree<T>& tree, std::vector<VertexId> vertex_set) {
  require_valid(tree);
  if (vertex_set.empty()) throw Error(ErrorCode::kInvalidArgument, "contract: empty vertex set");
  std::set<VertexId> set(vertex_set.begin(), vertex_set.end());
  if (set.size() != vertex_set.size())
    throw Error(ErrorCode::kInvalidArgument, "contract: repeated vertex");
  for (VertexId v : set) {
    require_vertex(tree, v);
    if (tree.is_leaf(v)) precondition("contract: set contains leaf " + id(v));
  }
  // Connected within the set, and every edge inside the set has rho = 1.
  std::set<VertexId> reached{*set.begin()};
  std::vector<VertexId> stack{*set.begin()};
  while (!stack.empty()) {
    VertexId v = stack.back();
    stack.pop_back();
    for (const auto& n : tree.neighbors(v)) {
      if (!set.count(n.vertex)) continue;
      if (!is_one(tree.edges()[n.edge].rho))
        precondition("contract: edge (" + id(v) + ", " + id(n.vertex) + ") has correlation " +
                     Field<T>::to_string(tree.edges()[n.edge].rho) + ", not 1");
      if (reached.insert(n.vertex).second) stack.push_back(n.vertex);
    }
  }
  if (reached.size() != set.size()) precondition("contract: vertex set is not connected");

  VertexId keep = *set.begin();
  std::vector<Edge<T>> edges;
  for (const auto& e : tree.edges()) {
    bool in_u = set.count(e.u), in_v = set.count(e.v);
    if (in_u && in_v) continue;
    Edge<T> moved = e;
    if (in_u) moved.u = keep;
    if (in_v) moved.v = keep;
    edges.push_back(std::move(moved));
  }
  std::vector<VertexId> vertices;
  for (VertexId v : tree.vertices())
    if (v == keep || !set.count(v)) vertices.push_back(v);
  return InfoFlowTree<T>(std::move(vertices), std::move(edges), tree.leaves());
}

template <NumericField T>
InfoFlowTree<T> split_vertex(const InfoFlowTree<T>& tree, VertexId v, int m,
                             const std::map<VertexId, int>& attachment) {
  require_valid(tree);
  require_vertex(tree, v);
  if (tree.is_leaf(v)) precondition("split-vertex: vertex " + id(v) + " is a leaf");
  if (m < 1) throw Error(ErrorCode::kInvalidArgument, "split-vertex: m must be positive");
  std::set<VertexId> nbrs;
  for (const auto& n : tree.neighbors(v)) nbrs.insert(n.vertex);
  for (const auto& [u, pos] : attachment) {
    if (!nbrs.count(u))
      throw Error(ErrorCode::kInvalidArgument,
                  "split-vertex: " + id(u) + " is not a neighbor of " + id(v));
    if (pos < 1 || pos > m)
      throw Error(ErrorCode::kInvalidArgument,
                  "split-vertex: position " + std::to_string(pos) + " outside 1.." + std::to_string(m));
  }
  if (attachment.size() != nbrs.size())
    throw Error(ErrorCode::kInvalidArgument, "split-vertex: attachment must cover every neighbor");

  VertexId base = tree.max_id();
  auto path_id = [&](int pos) { return pos == 1 ? v : base + pos - 1; };
  std::vector<Edge<T>> edges;
  for (const auto& e : tree.edges()) {
    Edge<T> moved = e;
    if (e.u == v) moved.u = path_id(attachment.at(e.v));
    if (e.v == v) moved.v = path_id(attachment.at(e.u));
    edges.push_back(std::move(moved));
  }
  auto vertices = tree.vertices();
  const T one = Field<T>::from_ratio(1, 1);
  for (int k = 2; k <= m; ++k) {
    vertices.push_back(path_id(k));
    edges.push_back({path_id(k - 1), path_id(k), one});
  }
  return InfoFlowTree<T>(std::move(vertices), std::move(edges), tree.leaves());
}

template <NumericField T>
InfoFlowTree<T> prune_hidden_pendant(const InfoFlowTree<T>& tree, VertexId w) {
  require_valid(tree);
  require_vertex(tree, w);
  if (tree.is_leaf(w) || tree.degree(w) != 1)
    precondition("prune: vertex " + id(w) + " is not a hidden degree-1 vertex");
  if (tree.vertex_count() <= 2) precondition("prune: tree would drop below two vertices");
  std::size_t e = tree.neighbors(w).front().edge;
  std::vector<Edge<T>> edges;
  for (std::size_t i = 0; i < tree.edges().size(); ++i)
    if (i != e) edges.push_back(tree.edges()[i]);
  std::vector<VertexId> vertices;
  for (VertexId v : tree.vertices())
    if (v != w) vertices.push_back(v);
  return InfoFlowTree<T>(std::move(vertices), std::move(edges), tree.leaves());
}

template <NumericField T>
TransformResult<T> to_binary(const InfoFlowTree<T>& tree) {
  require_valid(tree);
  if (tree.leaves().size() < 2) precondition("binary: need at least two leaves");
  TransformResult<T> result{tree, {}};
  auto& cur = result.tree;

  while (auto w = hidden_pendant(cur))
    push(cur, result.trace, TransformStep<T>{Rule::kPruneHiddenPendant, {*w}, {}, {}, {}});

  for (VertexId v : std::vector<VertexId>(cur.vertices())) {
    std::size_t d = cur.degree(v);
    if (d <= 3) continue;
    TransformStep<T> step{Rule::kSplitVertex, {v}, {}, {}, {}};
    int pos = 1;
    for (const auto& n : cur.neighbors(v)) step.attachment[n.vertex] = pos++;
    push(cur, result.trace, std::move(step));
  }

  const Edge<T>* first = nullptr;
  auto key = [](const Edge<T>& e) { return std::make_pair(std::min(e.u, e.v), std::max(e.u, e.v)); };
  for (const auto& e : cur.edges())
    if (!first || key(e) < key(*first)) first = &e;
  TransformStep<T> root_step{Rule::kSplitEdge, {first->u, first->v}, {}, {}, {}};
  root_step.after = {{first->u, 0, first->rho}, {0, first->v, Field<T>::from_ratio(1, 1)}};
  push(cur, result.trace, std::move(root_step));
  VertexId root = result.trace.steps.back().vertices[2];

  for (bool again = true; again;) {
    again = false;
    for (VertexId v : cur.vertices()) {
      if (v != root && !cur.is_leaf(v) && cur.degree(v) == 2) {
        push(cur, result.trace, TransformStep<T>{Rule::kMergeDegree2, {v}, {}, {}, {}});
        again = true;
        break;
      }
    }
  }
  return result;
}

template <NumericField T>
VertexId binary_root(const TransformResult<T>& result) {
  for (auto it = result.trace.steps.rbegin(); it != result.trace.steps.rend(); ++it)
    if (it->rule == Rule::kSplitEdge) return it->vertices.at(2);
  throw Error(ErrorCode::kInvalidArgument, "trace has no root-creating split");
}

template <NumericField T>
std::optional<std::vector<VertexId>> caterpillar_spine(const InfoFlowTree<T>& tree) {
  require_valid(tree);
  std::vector<VertexId> internal = tree.internal_vertices();
  std::set<VertexId> spine(internal.begin(), internal.end());
  if (spine.empty()) return std::vector<VertexId>{};
  std::vector<VertexId> ends;
  for (VertexId v : internal) {
    int inner = 0;
    for (const auto& n : tree.neighbors(v)) inner += spine.count(n.vertex) ? 1 : 0;
    if (inner > 2) return std::nullopt;
    if (inner <= 1) ends.push_back(v);
  }
  // Removing leaves from a tree leaves it connected, so degree <= 2 makes it a path.
  VertexId start = *std::min_element(ends.begin(), ends.end());
  std::vector<VertexId> order{start};
  VertexId prev = start;
  for (bool more = true; more;) {
    more = false;
    for (const auto& n : tree.neighbors(order.back())) {
      if (spine.count(n.vertex) && n.vertex != prev) {
        prev = order.back();
        order.push_back(n.vertex);
        more = true;
        break;
      }
    }
  }
  return order;
}

template <NumericField T>
std::optional<std::vector<VertexId>> simple_caterpillar_spine(const InfoFlowTree<T>& tree) {
  auto spine = caterpillar_spine(tree);
  if (!spine || spine->size() < 2) return std::nullopt;
  for (VertexId v : *spine)
    if (leaf_neighbors(tree, v).size() != 1) return std::nullopt;
  return spine;
}

template <NumericField T>
TransformResult<T> to_simple_caterpillar(const InfoFlowTree<T>& tree) {
  require_valid(tree);
  if (!caterpillar_spine(tree)) precondition("simple-caterpillar: input is not a caterpillar");
  if (tree.leaves().size() < 2) precondition("simple-caterpillar: need at least two leaves");
  TransformResult<T> result{tree, {}};
  auto& cur = result.tree;

  // Spine endpoints without leaves are hidden pendants.
  while (auto w = hidden_pendant(cur))
    push(cur, result.trace, TransformStep<T>{Rule::kPruneHiddenPendant, {*w}, {}, {}, {}});

  if (caterpillar_spine(cur)->empty()) {
    // Two leaves joined by one edge: insert a spine vertex between them.
    const auto& e = cur.edges().front();
    TransformStep<T> step{Rule::kSplitEdge, {e.u, e.v}, {}, {}, {}};
    step.after = {{e.u, 0, e.rho}, {0, e.v, Field<T>::from_ratio(1, 1)}};
    push(cur, result.trace, std::move(step));
  }

  std::vector<VertexId> spine = *caterpillar_spine(cur);
  std::optional<VertexId> previous;  // spine vertex now adjacent on the left
  for (VertexId v : spine) {
    auto leaves = leaf_neighbors(cur, v);
    if (leaves.empty()) {
      push(cur, result.trace, TransformStep<T>{Rule::kMergeDegree2, {v}, {}, {}, {}});
      continue;
    }
    if (leaves.size() == 1) {
      previous = v;
      continue;
    }
    TransformStep<T> step{Rule::kSplitVertex, {v}, {}, {}, {}};
    const int m = static_cast<int>(leaves.size());
    for (int k = 0; k < m; ++k) step.attachment[leaves[k]] = k + 1;
    for (const auto& n : cur.neighbors(v))
      if (!cur.is_leaf(n.vertex)) step.attachment[n.vertex] = (previous == n.vertex) ? 1 : m;
    push(cur, result.trace, std::move(step));
    previous = result.trace.steps.back().vertices.back();
  }
  if (!simple_caterpillar_spine(cur))
    throw Error(ErrorCode::kPrecondition, "simple-caterpillar: internal error, result not simple");
  return result;
}

template <NumericField T>
InfoFlowTree<T> apply_step(const InfoFlowTree<T>& tree, const TransformStep<T>& step) {
  auto arg = [&](std::size_t i) {
    if (step.vertices.size() <= i)
      throw Error(ErrorCode::kInvalidArgument,
                  std::string(rule_name(step.rule)) + ": missing vertex argument");
    return step.vertices[i];
  };
  switch (step.rule) {
    case Rule::kNegateInternalVertex:
      return negate_internal_vertex(tree, arg(0));
    case Rule::kMergeDegree2:
      return merge_degree2(tree, arg(0));
    case Rule::kPruneHiddenPendant:
      return prune_hidden_pendant(tree, arg(0));
    case Rule::kContractUnitSubgraph:
      return contract_unit_subgraph(tree, step.vertices);
    case Rule::kSplitEdge: {
      VertexId u = arg(0), v = arg(1);
      VertexId w = step.vertices.size() > 2 ? step.vertices[2] : 0;
      const EdgeCorrelation<T>* first = nullptr;
      const EdgeCorrelation<T>* second = nullptr;
      if (step.vertices.size() > 2) {
        first = find_edge(step.after, u, w);
        second = find_edge(step.after, w, v);
      } else if (step.after.size() == 2) {
        first = &step.after[0];
        second = &step.after[1];
      }
      if (!first || !second)
        throw Error(ErrorCode::kInvalidArgument, "split-edge: factors missing from step");
      if (step.vertices.size() > 2 && w != tree.max_id() + 1)
        throw Error(ErrorCode::kInvalidArgument, "split-edge: replay would create vertex " +
                                                     id(tree.max_id() + 1) + ", trace says " + id(w));
      return split_edge(tree, u, v, first->rho, second->rho);
    }
    case Rule::kSplitVertex: {
      int m = 0;
      for (const auto& [_, pos] : step.attachment) m = std::max(m, pos);
      if (step.vertices.size() > 1) {
        m = std::max<int>(m, static_cast<int>(step.vertices.size()));
        for (std::size_t k = 1; k < step.vertices.size(); ++k)
          if (step.vertices[k] != tree.max_id() + static_cast<VertexId>(k))
            throw Error(ErrorCode::kInvalidArgument, "split-vertex: replay id mismatch");
      }
      return split_vertex(tree, arg(0), std::max(m, 1), step.attachment);
    }
    case Rule::kNormalizeInternalSigns:
    case Rule::kToBinary:
    case Rule::kToSimpleCaterpillar:
      break;
  }
  throw Error(ErrorCode::kInvalidArgument,
              std::string(rule_name(step.rule)) + " is composite and cannot appear as a step");
}

template <NumericField T>
TransformResult<T> apply_recorded(const InfoFlowTree<T>& tree, TransformStep<T> request) {
  TransformResult<T> result{tree, {}};
  push(result.tree, result.trace, std::move(request));
  return result;
}

template <NumericField T>
InfoFlowTree<T> replay(const InfoFlowTree<T>& tree, const TransformTrace<T>& trace) {
  InfoFlowTree<T> cur = tree;
  for (const auto& step : trace.steps) cur = apply_step(cur, step);
  return cur;
}

template <NumericField T>
bool check_equivalence(const InfoFlowTree<T>& a, const InfoFlowTree<T>& b, double tol) {
  require_valid(a);
  require_valid(b);
  std::set<VertexId> la(a.leaves().begin(), a.leaves().end());
  std::set<VertexId> lb(b.leaves().begin(), b.leaves().end());
  if (la != lb) throw Error(ErrorCode::kInvalidArgument, "equivalence: leaf sets differ");
  return distributions_equal(leaf_distribution(a), leaf_distribution(b), tol);
}

#define IFT_INSTANTIATE(T)                                                                       \
  template TransformResult<T> apply_recorded(const InfoFlowTree<T>&, TransformStep<T>);          \
  template InfoFlowTree<T> negate_internal_vertex(const InfoFlowTree<T>&, VertexId);             \
  template TransformResult<T> normalize_internal_signs(const InfoFlowTree<T>&);                  \
  template InfoFlowTree<T> merge_degree2(const InfoFlowTree<T>&, VertexId);                      \
  template InfoFlowTree<T> split_edge(const InfoFlowTree<T>&, VertexId, VertexId, const T&,      \
                                      const T&);                                                 \
  template InfoFlowTree<T> contract_unit_subgraph(const InfoFlowTree<T>&, std::vector<VertexId>); \
  template InfoFlowTree<T> split_vertex(const InfoFlowTree<T>&, VertexId, int,                   \
                                        const std::map<VertexId, int>&);                         \
  template InfoFlowTree<T> prune_hidden_pendant(const InfoFlowTree<T>&, VertexId);               \
  template TransformResult<T> to_binary(const InfoFlowTree<T>&);                                 \
  template VertexId binary_root(const TransformResult<T>&);                                      \
  template std::optional<std::vector<VertexId>> caterpillar_spine(const InfoFlowTree<T>&);       \
  template std::optional<std::vector<VertexId>> simple_caterpillar_spine(const InfoFlowTree<T>&); \
  template TransformResult<T> to_simple_caterpillar(const InfoFlowTree<T>&);                     \
  template InfoFlowTree<T> apply_step(const InfoFlowTree<T>&, const TransformStep<T>&);          \
  template InfoFlowTree<T> replay(const InfoFlowTree<T>&, const TransformTrace<T>&);             \
  template bool check_equivalence(const InfoFlowTree<T>&, const InfoFlowTree<T>&, double);
IFT_INSTANTIATE(Rational)
IFT_INSTANTIATE(double)
#undef IFT_INSTANTIATE

}  // namespace ift
