#pragma once

// Leaf-law-preserving rewrites of information flow trees. Every rewrite keeps
// the leaf label set; check_equivalence() compares the leaf laws directly.

#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "ift/tree.hpp"

namespace ift {

enum class Rule {
  kNegateInternalVertex,
  kNormalizeInternalSigns,
  kMergeDegree2,
  kSplitEdge,
  kContractUnitSubgraph,
  kSplitVertex,
  kToBinary,
  kToSimpleCaterpillar,
  kPruneHiddenPendant,
};

std::string_view rule_name(Rule rule);
/// Accepts the names printed by rule_name(); throws kInvalidArgument.
Rule parse_rule(std::string_view name);

template <NumericField T>
struct EdgeCorrelation {
  VertexId u = 0;
  VertexId v = 0;
  T rho{};

  friend bool operator==(const EdgeCorrelation&, const EdgeCorrelation&) = default;
};

/// One primitive rewrite. `vertices` holds the rule's vertex arguments:
///   negate / merge / prune: {w}
///   split-edge: {u, v, new_vertex}
///   contract: the contracted set, survivor first
///   split-vertex: {v, w_2, ..., w_m}; `attachment` maps neighbor -> position
/// `before` / `after` record the correlations of the touched edges.
template <NumericField T>
struct TransformStep {
  Rule rule = Rule::kNegateInternalVertex;
  std::vector<VertexId> vertices;
  std::map<VertexId, int> attachment;
  std::vector<EdgeCorrelation<T>> before;
  std::vector<EdgeCorrelation<T>> after;

  friend bool operator==(const TransformStep&, const TransformStep&) = default;
};

template <NumericField T>
struct TransformTrace {
  std::vector<TransformStep<T>> steps;

  friend bool operator==(const TransformTrace&, const TransformTrace&) = default;
};

template <NumericField T>
struct TransformResult {
  InfoFlowTree<T> tree;
  TransformTrace<T> trace;
};

/// Flips the sign of every edge at internal vertex w.
template <NumericField T>
InfoFlowTree<T> negate_internal_vertex(const InfoFlowTree<T>& tree, VertexId w);

/// Top-down from the lowest-id root: every non-leaf vertex whose parent edge
/// is negative is negated. Afterwards no edge between two internal vertices
/// is negative.
template <NumericField T>
TransformResult<T> normalize_internal_signs(const InfoFlowTree<T>& tree);

/// Removes degree-2 internal vertex v, joining its neighbors by one edge
/// with the product correlation.
template <NumericField T>
InfoFlowTree<T> merge_degree2(const InfoFlowTree<T>& tree, VertexId v);

/// Replaces edge (u, v) by u - w - v with correlations (rho1, rho2), where
/// w = max id + 1. Requires rho1 * rho2 == rho(u, v).
template <NumericField T>
InfoFlowTree<T> split_edge(const InfoFlowTree<T>& tree, VertexId u, VertexId v, const T& rho1,
                           const T& rho2);

/// Contracts a connected leaf-free vertex set whose internal edges all have
/// correlation 1 onto its lowest id.
template <NumericField T>
InfoFlowTree<T> contract_unit_subgraph(const InfoFlowTree<T>& tree, std::vector<VertexId> vertex_set);

/// Replaces internal vertex v by a correlation-1 path w_1..w_m (w_1 keeps
/// v's id, the rest take fresh ids in order). `attachment` sends each former
/// neighbor of v to a position in 1..m and must cover all of them.
template <NumericField T>
InfoFlowTree<T> split_vertex(const InfoFlowTree<T>& tree, VertexId v, int m,
                             const std::map<VertexId, int>& attachment);

/// Drops a degree-1 vertex that is not a leaf (its variable is never
/// observed, so the leaf law is unchanged).
template <NumericField T>
InfoFlowTree<T> prune_hidden_pendant(const InfoFlowTree<T>& tree, VertexId w);

/// Equivalent rooted binary tree. High-degree vertices are split into paths,
/// the lexicographically smallest edge is split with factors (rho, 1) to
/// create the root, and remaining non-root degree-2 vertices are merged.
/// The root is the last vertex of the trace's split-edge step.
template <NumericField T>
TransformResult<T> to_binary(const InfoFlowTree<T>& tree);

/// Root of a tree produced by to_binary(): the unique degree-2 vertex, or
/// the vertex created by the split when several qualify.
template <NumericField T>
VertexId binary_root(const TransformResult<T>& result);

/// Spine of a caterpillar: the non-leaf vertices, ordered from the endpoint
/// with the smaller id. Empty if the tree is not a caterpillar or has no
/// internal vertex.
template <NumericField T>
std::optional<std::vector<VertexId>> caterpillar_spine(const InfoFlowTree<T>& tree);

/// Spine of a simple caterpillar, or nullopt: at least two spine vertices,
/// each adjacent to exactly one leaf.
template <NumericField T>
std::optional<std::vector<VertexId>> simple_caterpillar_spine(const InfoFlowTree<T>& tree);

/// Equivalent simple caterpillar. Throws kPrecondition if the input is not a
/// caterpillar or has fewer than two leaves.
template <NumericField T>
TransformResult<T> to_simple_caterpillar(const InfoFlowTree<T>& tree);

/// Applies one recorded step.
template <NumericField T>
InfoFlowTree<T> apply_step(const InfoFlowTree<T>& tree, const TransformStep<T>& step);

/// Applies one step and records it with its touched edges, filling in the
/// fresh vertex ids of split-edge and split-vertex. For split-edge the
/// request carries {u, v} and `after` = {(u, 0, rho1), (0, v, rho2)}.
template <NumericField T>
TransformResult<T> apply_recorded(const InfoFlowTree<T>& tree, TransformStep<T> request);

/// Applies every step of a trace in order.
template <NumericField T>
InfoFlowTree<T> replay(const InfoFlowTree<T>& tree, const TransformTrace<T>& trace);

/// True iff both trees induce the same law on their (identical) leaf set.
/// Throws kInvalidArgument when the leaf sets differ.
template <NumericField T>
bool check_equivalence(const InfoFlowTree<T>& a, const InfoFlowTree<T>& b,
                       double tol = kFloatTolerance);

}  // namespace ift
