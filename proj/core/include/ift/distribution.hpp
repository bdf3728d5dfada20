#pragma once

#include <cstddef>
#include <cstdint>
#include <utility>
#include <vector>

#include "ift/numeric.hpp"
#include "ift/tree.hpp"

namespace ift {

/// Default limit on the number of variables in a dense table.
inline constexpr std::size_t kDefaultVariableCap = 20;

/// Dense law over {+-1}^n. Entry i is the probability of the assignment in
/// which label k takes the spin encoded by bit k of i (+1 -> 0, -1 -> 1).
template <NumericField T>
class JointDistribution {
 public:
  JointDistribution() = default;
  /// Throws kCapExceeded if labels exceed `cap`, kInvalidArgument for a size
  /// mismatch, duplicate labels, negative entries, or a total that is not 1
  /// (exactly for rationals, within kFloatTolerance for doubles).
  JointDistribution(std::vector<VertexId> labels, std::vector<T> probs,
                    std::size_t cap = kDefaultVariableCap);

  const std::vector<VertexId>& labels() const { return labels_; }
  const std::vector<T>& probs() const { return probs_; }
  std::size_t variable_count() const { return labels_.size(); }
  std::size_t size() const { return probs_.size(); }
  const T& operator[](std::size_t index) const { return probs_[index]; }

  /// Position of `label` in labels(); throws kInvalidArgument if absent.
  std::size_t position(VertexId label) const;
  bool has_label(VertexId label) const;

  std::size_t index_of(const Assignment& full) const;
  Assignment assignment_at(std::size_t index) const;

  /// Probability that every label in `partial` takes its assigned value.
  T probability(const Assignment& partial) const;

  JointDistribution marginal(const std::vector<VertexId>& keep) const;
  /// Same law with labels permuted into `order` (a permutation of labels()).
  JointDistribution reordered(const std::vector<VertexId>& order) const;

  /// Skips the normalization check; for kernels whose output sums to one by
  /// construction.
  static JointDistribution unchecked(std::vector<VertexId> labels, std::vector<T> probs) {
    JointDistribution d;
    d.labels_ = std::move(labels);
    d.probs_ = std::move(probs);
    return d;
  }

  friend bool operator==(const JointDistribution&, const JointDistribution&) = default;

 private:
  std::vector<VertexId> labels_;
  std::vector<T> probs_;
};

/// Bayes restriction to the labels not fixed by `partial`. Throws
/// kZeroProbability when Pr[partial] = 0 and kInvalidArgument when `partial`
/// names a label outside the table.
template <NumericField T>
JointDistribution<T> condition(const JointDistribution<T>& dist, const Assignment& partial);

/// Entrywise comparison after aligning label order; label sets must match.
template <NumericField T>
bool distributions_equal(const JointDistribution<T>& a, const JointDistribution<T>& b,
                         double tol = kFloatTolerance);

JointDistribution<double> to_float(const JointDistribution<Rational>& dist);

/// Covariance of two labels computed from the table.
template <NumericField T>
T covariance(const JointDistribution<T>& dist, VertexId u, VertexId v);

extern template class JointDistribution<Rational>;
extern template class JointDistribution<double>;

}  // namespace ift
