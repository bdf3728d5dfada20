#pragma once

// Exact leaf laws of information flow trees: a dynamic program over the
// rooted tree, a brute-force enumeration oracle, subtree event likelihoods,
// and forward sampling.

#include <cstddef>
#include <cstdint>
#include <vector>

#include "ift/distribution.hpp"
#include "ift/tree.hpp"

namespace ift {

inline constexpr std::size_t kDefaultVertexCap = 24;

/// Exact law of the vertices in `observed` (any subset of V, in the given
/// order). Root-to-leaf dynamic program: each vertex carries its subtree's
/// observed-variable table conditioned on its own value.
template <NumericField T>
JointDistribution<T> joint_distribution(const InfoFlowTree<T>& tree,
                                        const std::vector<VertexId>& observed,
                                        std::size_t cap = kDefaultVariableCap);

/// Law of the leaf variables in tree.leaves() order.
template <NumericField T>
JointDistribution<T> leaf_distribution(const InfoFlowTree<T>& tree,
                                       std::size_t cap = kDefaultVariableCap);

/// Law of all vertex variables by enumerating 2^|V| assignments, each with
/// weight 1/2 * prod_e (1/2 + rho(e) x_u x_v / 2).
template <NumericField T>
JointDistribution<T> vertex_distribution_bruteforce(const InfoFlowTree<T>& tree,
                                                    std::size_t vertex_cap = kDefaultVertexCap);

/// Oracle counterpart of leaf_distribution.
template <NumericField T>
JointDistribution<T> leaf_distribution_bruteforce(const InfoFlowTree<T>& tree,
                                                  std::size_t vertex_cap = kDefaultVertexCap);

/// The part of the tree reachable from `root` without stepping into any
/// vertex of `blocked` (normally the root's neighbors on a path).
struct SubtreeRef {
  VertexId root = 0;
  std::vector<VertexId> blocked;
};

/// Leaves of the tree lying in the referenced subtree (the root included if
/// it is itself a leaf).
template <NumericField T>
std::vector<VertexId> subtree_leaves(const InfoFlowTree<T>& tree, const SubtreeRef& subtree);

/// Pr[leaf outcome | X_root = root_value], restricted to the subtree. Leaves
/// of the subtree not named by `outcome` are unconstrained; naming a label
/// that is not a leaf of the subtree throws kInvalidArgument.
template <NumericField T>
T subtree_event_prob(const InfoFlowTree<T>& tree, const SubtreeRef& subtree,
                     const Assignment& outcome, Spin root_value);

/// Whole-tree form: the subtree is everything reachable from `root`.
template <NumericField T>
T subtree_event_prob(const InfoFlowTree<T>& tree, VertexId root, const Assignment& outcome,
                     Spin root_value);

/// One draw of every vertex and edge variable.
struct Sample {
  std::uint64_t seed = 0;
  Assignment vertices;
  /// R_e = X_u X_v, aligned with tree.edges().
  std::vector<Spin> edges;
};

/// Root (lowest id) uniform, then each child copies its parent with
/// probability (1 + rho) / 2.
template <NumericField T>
Sample sample(const InfoFlowTree<T>& tree, std::uint64_t seed);

}  // namespace ift
