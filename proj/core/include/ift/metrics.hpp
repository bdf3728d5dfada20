#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "ift/distribution.hpp"
#include "ift/tree.hpp"

namespace ift {

/// Average of |Cov[X_u, X_v]| over unordered pairs of distinct labels.
template <NumericField T>
T avg_covariance(const JointDistribution<T>& dist);

/// Average over |J| = t, over pairs outside J, of the expected |Cov| after
/// revealing X_J. Zero-probability outcomes of X_J are skipped. Requires
/// 0 <= t <= n - 2.
template <NumericField T>
T avg_cov_cond(const JointDistribution<T>& dist, int t);

/// I(X_u; X_v) in nats.
template <NumericField T>
double mutual_information(const JointDistribution<T>& dist, VertexId u, VertexId v);

/// avg_cov_cond with conditional mutual information (nats) in place of |Cov|.
template <NumericField T>
double avg_info_cond(const JointDistribution<T>& dist, int t);

/// Average over leaf pairs of the expected |Cov| given every other leaf.
/// Uses the closed-form route through expected_abs_cond_cov.
template <NumericField T>
T conjectureB_lhs(const InfoFlowTree<T>& tree, std::size_t cap = kDefaultVariableCap);

/// rho^2 * E[Var[X_0 | X_1..X_t]] in the homogeneous star, summed over the
/// number of agreeing leaves with binomial weights.
template <NumericField T>
T homogeneous_star_cond_variance(const T& rho, int t);
template <>
Rational homogeneous_star_cond_variance(const Rational& rho, int t);
template <>
double homogeneous_star_cond_variance(const double& rho, int t);

template <NumericField T>
struct MetricPoint {
  int t = 0;
  T value{};
};

template <NumericField T>
struct MetricSeries {
  std::string metric;
  std::size_t n = 0;
  std::vector<MetricPoint<T>> values;
};

template <NumericField T>
MetricSeries<T> avg_cov_cond_series(const JointDistribution<T>& dist, int t_first, int t_last);

template <NumericField T>
MetricSeries<double> avg_info_cond_series(const JointDistribution<T>& dist, int t_first, int t_last);

}  // namespace ift
