#include "ift/metrics.hpp"

#include <bit>
#include <cmath>
#include <functional>

#include "ift/covariance.hpp"
#include "ift/errors.hpp"
#include "ift/parallel.hpp"

namespace ift {

namespace {

using Mask = std::uint64_t;

void check_order(std::size_t n, int t) {
  if (n < 2) throw Error(ErrorCode::kInvalidArgument, "need at least two variables");
  if (t < 0 || static_cast<std::size_t>(t) > n - 2)
    throw Error(ErrorCode::kInvalidArgument,
                "conditioning order " + std::to_string(t) + " outside 0.." + std::to_string(n - 2));
}

// Every subset of {0..n-1} with exactly t elements, in increasing mask order.
std::vector<Mask> subsets_of_size(std::size_t n, int t) {
  std::vector<Mask> out;
  if (t == 0) return {Mask{0}};
  Mask m = (Mask{1} << t) - 1;
  const Mask limit = Mask{1} << n;
  while (m < limit) {
    out.push_back(m);
    Mask c = m & (~m + 1);
    Mask r = m + c;
    m = (((r ^ m) >> 2) / c) | r;
  }
  return out;
}

Mask extract_bits(std::size_t index, Mask mask) {
  Mask out = 0;
  int k = 0;
  for (Mask m = mask; m; m &= m - 1, ++k)
    if (index & (m & (~m + 1))) out |= Mask{1} << k;
  return out;
}

// Pair cells of X_u, X_v jointly with each outcome of X_J:
// cells[(o * pairs + p) * 4 + 2 * bit_u + bit_v].
template <NumericField T>
struct PairCells {
  std::vector<std::pair<std::size_t, std::size_t>> pairs;
  std::size_t outcomes = 0;
  std::vector<T> cells;

  const T* at(std::size_t outcome, std::size_t pair) const { return &cells[(outcome * pairs.size() + pair) * 4]; }
};

template <NumericField T>
PairCells<T> pair_cells(const JointDistribution<T>& dist, Mask j) {
  const std::size_t n = dist.variable_count();
  PairCells<T> pc;
  for (std::size_t u = 0; u < n; ++u)
    for (std::size_t v = u + 1; v < n; ++v)
      if (!((j >> u) & 1u) && !((j >> v) & 1u)) pc.pairs.emplace_back(u, v);
  pc.outcomes = std::size_t{1} << std::popcount(j);
  pc.cells.assign(pc.outcomes * pc.pairs.size() * 4, Field<T>::from_ratio(0, 1));
  for (std::size_t i = 0; i < dist.size(); ++i) {
    const T& p = dist[i];
    if (p == Field<T>::from_ratio(0, 1)) continue;
    const std::size_t o = extract_bits(i, j);
    for (std::size_t k = 0; k < pc.pairs.size(); ++k) {
      auto [u, v] = pc.pairs[k];
      pc.cells[(o * pc.pairs.size() + k) * 4 + 2 * ((i >> u) & 1u) + ((i >> v) & 1u)] += p;
    }
  }
  return pc;
}

// Pr[cell block] * |Cov| = 4 |ad - bc| / Z.
template <NumericField T>
T weighted_abs_cov(const T* c) {
  T z = c[0] + c[1] + c[2] + c[3];
  if (z == Field<T>::from_ratio(0, 1)) return z;
  T det = c[0] * c[3] - c[1] * c[2];
  return Field<T>::from_ratio(4, 1) * Field<T>::abs(det) / z;
}

// Pr[cell block] * I(X_u; X_v | block) in nats.
double weighted_mi(const double* c) {
  double z = c[0] + c[1] + c[2] + c[3];
  if (z <= 0.0) return 0.0;
  double row[2] = {c[0] + c[1], c[2] + c[3]};
  double col[2] = {c[0] + c[2], c[1] + c[3]};
  double sum = 0.0;
  for (int a = 0; a < 2; ++a)
    for (int b = 0; b < 2; ++b) {
      double p = c[2 * a + b];
      if (p > 0.0) sum += p * std::log(p * z / (row[a] * col[b]));
    }
  return std::max(sum, 0.0);
}

}  // namespace

template <NumericField T>
T avg_covariance(const JointDistribution<T>& dist) {
  return avg_cov_cond(dist, 0);
}

template <NumericField T>
T avg_cov_cond(const JointDistribution<T>& dist, int t) {
  const std::size_t n = dist.variable_count();
  check_order(n, t);
  const auto subsets = subsets_of_size(n, t);
  std::function<T(std::size_t)> per_subset = [&](std::size_t s) {
    auto pc = pair_cells(dist, subsets[s]);
    T sum = Field<T>::from_ratio(0, 1);
    for (std::size_t o = 0; o < pc.outcomes; ++o)
      for (std::size_t k = 0; k < pc.pairs.size(); ++k) sum += weighted_abs_cov(pc.at(o, k));
    return sum;
  };
  auto partial = parallel_map<T>(subsets.size(), per_subset);
  T total = Field<T>::from_ratio(0, 1);
  for (const T& p : partial) total += p;
  const std::size_t pairs = (n - t) * (n - t - 1) / 2;
  return total / (T(static_cast<long>(subsets.size())) * T(static_cast<long>(pairs)));
}

template <NumericField T>
double mutual_information(const JointDistribution<T>& dist, VertexId u, VertexId v) {
  if (u == v) throw Error(ErrorCode::kInvalidArgument, "mutual information needs distinct labels");
  auto m = dist.marginal({u, v});
  double c[4];
  // marginal index: bit 0 is u, bit 1 is v; weighted_mi wants 2 * bit_u + bit_v.
  for (std::size_t i = 0; i < 4; ++i) c[2 * (i & 1u) + (i >> 1)] = Field<T>::to_double(m[i]);
  return weighted_mi(c);
}

template <NumericField T>
double avg_info_cond(const JointDistribution<T>& dist, int t) {
  const std::size_t n = dist.variable_count();
  check_order(n, t);
  const auto subsets = subsets_of_size(n, t);
  std::function<double(std::size_t)> per_subset = [&](std::size_t s) {
    auto pc = pair_cells(dist, subsets[s]);
    double sum = 0.0;
    for (std::size_t o = 0; o < pc.outcomes; ++o)
      for (std::size_t k = 0; k < pc.pairs.size(); ++k) {
        const T* c = pc.at(o, k);
        double d[4];
        for (int i = 0; i < 4; ++i) d[i] = Field<T>::to_double(c[i]);
        sum += weighted_mi(d);
      }
    return sum;
  };
  auto partial = parallel_map<double>(subsets.size(), per_subset);
  double total = 0.0;
  for (double p : partial) total += p;
  const double pairs = static_cast<double>((n - t) * (n - t - 1) / 2);
  return total / (static_cast<double>(subsets.size()) * pairs);
}

template <NumericField T>
T conjectureB_lhs(const InfoFlowTree<T>& tree, std::size_t cap) {
  require_valid(tree);
  const auto& leaves = tree.leaves();
  if (leaves.size() < 2) throw Error(ErrorCode::kPrecondition, "need at least two leaves");
  if (leaves.size() > cap)
    throw Error(ErrorCode::kCapExceeded,
                std::to_string(leaves.size()) + " leaves exceed cap " + std::to_string(cap));
  std::vector<std::pair<VertexId, VertexId>> pairs;
  for (std::size_t a = 0; a < leaves.size(); ++a)
    for (std::size_t b = a + 1; b < leaves.size(); ++b) pairs.emplace_back(leaves[a], leaves[b]);
  std::function<T(std::size_t)> per_pair = [&](std::size_t k) {
    auto [u, v] = pairs[k];
    std::vector<VertexId> rest;
    for (VertexId l : leaves)
      if (l != u && l != v) rest.push_back(l);
    return expected_abs_cond_cov(tree, u, v, rest, cap).expectation;
  };
  auto values = parallel_map<T>(pairs.size(), per_pair);
  T total = Field<T>::from_ratio(0, 1);
  for (const T& x : values) total += x;
  return total / T(static_cast<long>(pairs.size()));
}

template <>
Rational homogeneous_star_cond_variance(const Rational& rho, int t) {
  if (t < 0) throw Error(ErrorCode::kInvalidArgument, "t must be nonnegative");
  if (rho < -1 || rho > 1) throw Error(ErrorCode::kInvalidArgument, "rho outside [-1, 1]");
  const Rational p = edge_transition(rho, +1), q = edge_transition(rho, -1);
  Rational sum = 0;
  mpz_class choose = 1;
  for (int k = 0; k <= t; ++k) {
    if (k > 0) choose = choose * (t - k + 1) / k;
    Rational a = 1, b = 1;
    for (int i = 0; i < k; ++i) { a *= p; b *= q; }
    for (int i = k; i < t; ++i) { a *= q; b *= p; }
    if (a + b == 0) continue;
    sum += Rational(choose) * 2 * a * b / (a + b);
  }
  return rho * rho * sum;
}

template <>
double homogeneous_star_cond_variance(const double& rho, int t) {
  if (t < 0) throw Error(ErrorCode::kInvalidArgument, "t must be nonnegative");
  if (!(rho >= -1.0 && rho <= 1.0)) throw Error(ErrorCode::kInvalidArgument, "rho outside [-1, 1]");
  const double p = (1.0 + rho) / 2.0, q = (1.0 - rho) / 2.0;
  if (p == 0.0 || q == 0.0) return t == 0 ? rho * rho : 0.0;
  // Log space keeps binomials and powers in range for large t.
  const double lp = std::log(p), lq = std::log(q);
  double sum = 0.0;
  for (int k = 0; k <= t; ++k) {
    double lc = std::lgamma(t + 1.0) - std::lgamma(k + 1.0) - std::lgamma(t - k + 1.0);
    double la = k * lp + (t - k) * lq;
    double lb = k * lq + (t - k) * lp;
    double hi = std::max(la, lb);
    double lsum = hi + std::log1p(std::exp(std::min(la, lb) - hi));
    sum += std::exp(lc + std::log(2.0) + la + lb - lsum);
  }
  return rho * rho * sum;
}

template <NumericField T>
MetricSeries<T> avg_cov_cond_series(const JointDistribution<T>& dist, int t_first, int t_last) {
  MetricSeries<T> s{"avgcovcond", dist.variable_count(), {}};
  if (t_first > t_last) throw Error(ErrorCode::kInvalidArgument, "empty t range");
  for (int t = t_first; t <= t_last; ++t) s.values.push_back({t, avg_cov_cond(dist, t)});
  return s;
}

template <NumericField T>
MetricSeries<double> avg_info_cond_series(const JointDistribution<T>& dist, int t_first, int t_last) {
  MetricSeries<double> s{"avginfocond", dist.variable_count(), {}};
  if (t_first > t_last) throw Error(ErrorCode::kInvalidArgument, "empty t range");
  for (int t = t_first; t <= t_last; ++t) s.values.push_back({t, avg_info_cond(dist, t)});
  return s;
}

#define IFT_INSTANTIATE(T)                                                                 \
  template T avg_covariance(const JointDistribution<T>&);                                  \
  template T avg_cov_cond(const JointDistribution<T>&, int);                               \
  template double mutual_information(const JointDistribution<T>&, VertexId, VertexId);     \
  template double avg_info_cond(const JointDistribution<T>&, int);                         \
  template T conjectureB_lhs(const InfoFlowTree<T>&, std::size_t);                         \
  template MetricSeries<T> avg_cov_cond_series(const JointDistribution<T>&, int, int);     \
  template MetricSeries<double> avg_info_cond_series(const JointDistribution<T>&, int, int);
IFT_INSTANTIATE(Rational)
IFT_INSTANTIATE(double)
#undef IFT_INSTANTIATE

}  // namespace ift
