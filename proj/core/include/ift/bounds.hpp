#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "ift/distribution.hpp"
#include "ift/tree.hpp"

namespace ift {

/// Center, leaf correlations and alpha = sum rho_i^2 of a star.
template <NumericField T>
struct StarSpec {
  VertexId center = 0;
  std::vector<VertexId> leaves;
  std::vector<T> rhos;
  T alpha{};
};

/// Recognizes a star: exactly one internal vertex, adjacent to every leaf.
template <NumericField T>
std::optional<StarSpec<T>> star_spec(const InfoFlowTree<T>& tree);

/// 4 exp(-alpha / 2). Throws kInvalidArgument for negative alpha.
double star_bound(double alpha);

/// E[Var[X_0 | Y]] for a star, exact over all leaf outcomes. Throws
/// kPrecondition if the tree is not a star.
template <NumericField T>
T star_expected_center_variance(const InfoFlowTree<T>& tree, std::size_t cap = kDefaultVariableCap);

/// sgn(rho_1 y_1 + ... + rho_m y_m) with sgn(0) = +1.
template <NumericField T>
Spin star_sign_statistic(std::span<const T> rhos, const Assignment& outcome,
                         std::span<const VertexId> leaves);

/// Pr[X_0 != S(Y)] for the sign statistic S; sits between the expected
/// center variance (divided by 4) and exp(-alpha / 2).
template <NumericField T>
T star_sign_error_probability(const StarSpec<T>& spec);

/// Average over distinct positions u < v of |rho_u| |rho_v| exp(-alpha(u, v)/2),
/// alpha(u, v) summing rho_i^2 over positions strictly between u and v.
double theoremC_star_quantity(std::span<const double> rhos);

/// k-th term exp(-2^(k-2)) 2^(k+1) of the dyadic series.
double theoremC_series_term(int k);

/// 4 (2 + e^(1/4) sum_k exp(-2^(k-2)) 2^(k+1)) evaluated by summation until
/// a term falls below `term_tolerance`.
double theoremC_constant_from_series(double term_tolerance = 1e-15);

/// Frozen value of the same constant (high-precision summation).
inline constexpr double kTheoremCConstant = 57.818690140645230662;

inline constexpr double theoremC_constant() { return kTheoremCConstant; }

/// Uniform law on {+-1}^(T+2) conditioned on the product of all variables
/// being +1. Labels are 1..T+2.
template <NumericField T>
JointDistribution<T> parity_counterexample(int order, std::size_t cap = kDefaultVariableCap);

enum class TreeFamily {
  kSimpleCaterpillar,
  kDepth2Caterpillar,
  kCompleteBinary,
  kRandomTree,
};

std::string_view family_name(TreeFamily family);
TreeFamily parse_family(std::string_view name);

struct ScanRecord {
  std::uint64_t trial = 0;
  std::uint64_t seed = 0;
  std::string family;
  std::string topology_hash;  // 16 hex digits
  int t = 0;                  // number of leaves
  std::vector<double> rhos;   // edge correlations in tree edge order
  std::string quantity = "conjectureB_lhs";
  double lhs = 0.0;
  double bound = 0.0;  // theoremC_constant() / t
  double margin = 0.0;  // bound - lhs
  double lhs_times_t = 0.0;
  /// Whether a negative margin counts as a violation (simple caterpillars,
  /// where the bound is a theorem); other families are observational.
  bool asserted = false;

  bool violation() const { return asserted && margin < 0.0; }

  friend bool operator==(const ScanRecord&, const ScanRecord&) = default;
};

struct ScanOptions {
  TreeFamily family = TreeFamily::kSimpleCaterpillar;
  std::uint64_t trials = 100;
  int min_leaves = 2;
  int max_leaves = 8;
  std::uint64_t seed = 1;
  unsigned threads = 0;  // 0: from IFT_THREADS or hardware
};

/// Records in trial order; identical for identical options.
std::vector<ScanRecord> scan_conjectureB(const ScanOptions& options);

/// FNV-1a over the canonical edge list (ids and order, not correlations).
template <NumericField T>
std::string topology_hash(const InfoFlowTree<T>& tree);

}  // namespace ift
