#pragma once

// Covariance of two vertex variables: the unconditioned path product, the
// closed form under factorized conditioning events, its ratio restatement,
// a brute-force oracle, and the expectation over leaf outcomes.

#include <optional>
#include <span>
#include <utility>
#include <vector>

#include "ift/inference.hpp"
#include "ift/tree.hpp"

namespace ift {

/// The path v_1..v_m between two vertices and the subtrees hanging off it.
/// hanging[i] is rooted at path[i] and blocked at its path neighbors.
template <NumericField T>
struct PathDecomposition {
  InfoFlowTree<T> tree;
  std::vector<VertexId> path;
  std::vector<T> spine_correlations;  // rho(v_i, v_{i+1}), size m - 1
  std::vector<SubtreeRef> hanging;
  std::vector<std::vector<VertexId>> hanging_leaves;

  std::size_t length() const { return path.size(); }
};

template <NumericField T>
PathDecomposition<T> decompose_path(const InfoFlowTree<T>& tree, VertexId u, VertexId v);

/// Splits a leaf outcome into the per-subtree events L_i.
template <NumericField T>
std::vector<Assignment> split_events(const PathDecomposition<T>& decomp, const Assignment& outcome);

/// Product of rho(e) along the u-v path. Throws kInvalidArgument if u == v.
template <NumericField T>
T path_covariance(const InfoFlowTree<T>& tree, VertexId u, VertexId v);

/// lambda_i^+ and lambda_i^-: Pr[L_i | X_i = +1] and Pr[L_i | X_i = -1].
template <NumericField T>
struct EventLikelihood {
  T plus{};
  T minus{};
};

template <NumericField T>
struct FormulaValue {
  T covariance{};
  T event_probability{};  // Pr[L]
};

/// Closed form from raw likelihoods: prod rho_i * prod lambda_i^+ lambda_i^-
/// / Pr[L]^2, with Pr[L] from a forward pass along the path. Throws
/// kZeroProbability when Pr[L] = 0.
template <NumericField T>
FormulaValue<T> conditional_covariance_from_likelihoods(std::span<const T> spine_correlations,
                                                        std::span<const EventLikelihood<T>> likelihoods);

template <NumericField T>
std::vector<EventLikelihood<T>> event_likelihoods(const PathDecomposition<T>& decomp,
                                                  const std::vector<Assignment>& events);

/// Cov[X_1, X_m | L_1 and ... and L_m] in closed form.
template <NumericField T>
T conditional_covariance_formula(const PathDecomposition<T>& decomp,
                                 const std::vector<Assignment>& events);

template <NumericField T>
FormulaValue<T> conditional_covariance_formula_with_probability(
    const PathDecomposition<T>& decomp, const std::vector<Assignment>& events);

/// prod rho_i * (Pr[X = x | L] / Pr[X = x]) * (Pr[X = -x | L] / Pr[X = -x]),
/// where X is the path vector. The conditional and unconditional path laws
/// are read off the joint table of path vertices and conditioned leaves, so
/// this route shares no code with the likelihood form. Throws
/// kZeroProbability if Pr[L], Pr[X = x] or Pr[X = -x] is zero.
template <NumericField T>
T conditional_covariance_ratio(const PathDecomposition<T>& decomp,
                               const std::vector<Assignment>& events, const Assignment& x);

/// The ratio for every path assignment at once, indexed by path bits (bit k
/// is path[k], set for -1). Entries whose x or -x has probability zero are
/// empty. Throws kZeroProbability if Pr[L] = 0.
template <NumericField T>
std::vector<std::optional<T>> conditional_covariance_ratio_all(const PathDecomposition<T>& decomp,
                                                               const std::vector<Assignment>& events);

/// E[X_u X_v | outcome] - E[X_u | outcome] E[X_v | outcome] from the
/// enumerated law of all vertices.
template <NumericField T>
T conditional_covariance_bruteforce(const InfoFlowTree<T>& tree, VertexId u, VertexId v,
                                    const Assignment& outcome,
                                    std::size_t vertex_cap = kDefaultVertexCap);

template <NumericField T>
struct ConditionedCovariance {
  Assignment outcome;
  T probability{};
  T covariance{};
};

template <NumericField T>
struct CondCovReport {
  VertexId u = 0;
  VertexId v = 0;
  std::vector<VertexId> conditioning;
  /// Positive-probability outcomes in bit-index order of `conditioning`.
  std::vector<ConditionedCovariance<T>> outcomes;
  /// sum over outcomes of probability * |covariance|.
  T expectation{};
};

/// Expected |Cov[X_u, X_v | leaves]| over every outcome of the conditioning
/// leaves, zero-probability outcomes contributing nothing. u == v gives the
/// expected conditional variance.
template <NumericField T>
CondCovReport<T> expected_abs_cond_cov(const InfoFlowTree<T>& tree, VertexId u, VertexId v,
                                       const std::vector<VertexId>& conditioning_leaves,
                                       std::size_t cap = kDefaultVariableCap);

}  // namespace ift
