#include "ift/distribution.hpp"

#include <algorithm>
#include <set>

namespace ift {

template <NumericField T>
JointDistribution<T>::JointDistribution(std::vector<VertexId> labels, std::vector<T> probs,
                                        std::size_t cap)
    : labels_(std::move(labels)), probs_(std::move(probs)) {
  if (labels_.size() > cap)
    throw Error(ErrorCode::kCapExceeded, "distribution over " + std::to_string(labels_.size()) +
                                             " variables exceeds cap " + std::to_string(cap));
  if (probs_.size() != (std::size_t{1} << labels_.size()))
    throw Error(ErrorCode::kInvalidArgument,
                "table has " + std::to_string(probs_.size()) + " entries, expected 2^" +
                    std::to_string(labels_.size()));
  std::set<VertexId> unique(labels_.begin(), labels_.end());
  if (unique.size() != labels_.size())
    throw Error(ErrorCode::kInvalidArgument, "duplicate distribution label");
  T total = Field<T>::from_ratio(0, 1);
  const T zero = Field<T>::from_ratio(0, 1);
  for (const T& p : probs_) {
    if (p < zero) throw Error(ErrorCode::kInvalidArgument, "negative probability");
    total += p;
  }
  if (!Field<T>::equal(total, Field<T>::from_ratio(1, 1)))
    throw Error(ErrorCode::kInvalidArgument,
                "probabilities sum to " + Field<T>::to_string(total) + ", not 1");
}

template <NumericField T>
std::size_t JointDistribution<T>::position(VertexId label) const {
  auto it = std::find(labels_.begin(), labels_.end(), label);
  if (it == labels_.end())
    throw Error(ErrorCode::kInvalidArgument,
                "label " + std::to_string(label) + " not in distribution");
  return static_cast<std::size_t>(it - labels_.begin());
}

template <NumericField T>
bool JointDistribution<T>::has_label(VertexId label) const {
  return std::find(labels_.begin(), labels_.end(), label) != labels_.end();
}

template <NumericField T>
std::size_t JointDistribution<T>::index_of(const Assignment& full) const {
  if (full.size() != labels_.size())
    throw Error(ErrorCode::kInvalidArgument, "assignment does not cover every label");
  std::size_t index = 0;
  for (std::size_t k = 0; k < labels_.size(); ++k) index |= std::size_t{full.at(labels_[k]).bit()} << k;
  return index;
}

template <NumericField T>
Assignment JointDistribution<T>::assignment_at(std::size_t index) const {
  Assignment out;
  for (std::size_t k = 0; k < labels_.size(); ++k) out.set(labels_[k], Spin::from_bit((index >> k) & 1u));
  return out;
}

template <NumericField T>
T JointDistribution<T>::probability(const Assignment& partial) const {
  std::size_t mask = 0, want = 0;
  for (const auto& [label, spin] : partial) {
    std::size_t k = position(label);
    mask |= std::size_t{1} << k;
    want |= std::size_t{spin.bit()} << k;
  }
  T total = Field<T>::from_ratio(0, 1);
  for (std::size_t i = 0; i < probs_.size(); ++i)
    if ((i & mask) == want) total += probs_[i];
  return total;
}

template <NumericField T>
JointDistribution<T> JointDistribution<T>::marginal(const std::vector<VertexId>& keep) const {
  std::vector<std::size_t> pos;
  for (VertexId l : keep) pos.push_back(position(l));
  std::set<VertexId> unique(keep.begin(), keep.end());
  if (unique.size() != keep.size())
    throw Error(ErrorCode::kInvalidArgument, "duplicate label in marginal");
  std::vector<T> out(std::size_t{1} << keep.size(), Field<T>::from_ratio(0, 1));
  for (std::size_t i = 0; i < probs_.size(); ++i) {
    std::size_t j = 0;
    for (std::size_t k = 0; k < pos.size(); ++k) j |= ((i >> pos[k]) & 1u) << k;
    out[j] += probs_[i];
  }
  return unchecked(keep, std::move(out));
}

template <NumericField T>
JointDistribution<T> JointDistribution<T>::reordered(const std::vector<VertexId>& order) const {
  if (order.size() != labels_.size())
    throw Error(ErrorCode::kInvalidArgument, "reorder needs a permutation of the labels");
  return marginal(order);
}

template <NumericField T>
JointDistribution<T> condition(const JointDistribution<T>& dist, const Assignment& partial) {
  std::size_t mask = 0, want = 0;
  for (const auto& [label, spin] : partial) {
    std::size_t k = dist.position(label);
    mask |= std::size_t{1} << k;
    want |= std::size_t{spin.bit()} << k;
  }
  std::vector<VertexId> rest;
  std::vector<std::size_t> rest_pos;
  for (std::size_t k = 0; k < dist.labels().size(); ++k) {
    if (!((mask >> k) & 1u)) {
      rest.push_back(dist.labels()[k]);
      rest_pos.push_back(k);
    }
  }
  std::vector<T> out(std::size_t{1} << rest.size(), Field<T>::from_ratio(0, 1));
  T total = Field<T>::from_ratio(0, 1);
  for (std::size_t i = 0; i < dist.size(); ++i) {
    if ((i & mask) != want) continue;
    std::size_t j = 0;
    for (std::size_t k = 0; k < rest_pos.size(); ++k) j |= ((i >> rest_pos[k]) & 1u) << k;
    out[j] += dist[i];
    total += dist[i];
  }
  if (total == Field<T>::from_ratio(0, 1))
    throw Error(ErrorCode::kZeroProbability, "conditioning on a zero-probability outcome");
  for (T& p : out) p /= total;
  return JointDistribution<T>::unchecked(std::move(rest), std::move(out));
}

template <NumericField T>
bool distributions_equal(const JointDistribution<T>& a, const JointDistribution<T>& b, double tol) {
  std::set<VertexId> la(a.labels().begin(), a.labels().end());
  std::set<VertexId> lb(b.labels().begin(), b.labels().end());
  if (la != lb) throw Error(ErrorCode::kInvalidArgument, "distributions have different labels");
  auto bb = b.reordered(a.labels());
  for (std::size_t i = 0; i < a.size(); ++i)
    if (!Field<T>::equal(a[i], bb[i], tol)) return false;
  return true;
}

JointDistribution<double> to_float(const JointDistribution<Rational>& dist) {
  std::vector<double> probs;
  probs.reserve(dist.size());
  for (const auto& p : dist.probs()) probs.push_back(p.get_d());
  return JointDistribution<double>::unchecked(dist.labels(), std::move(probs));
}

template <NumericField T>
T covariance(const JointDistribution<T>& dist, VertexId u, VertexId v) {
  std::size_t pu = dist.position(u), pv = dist.position(v);
  T exy = Field<T>::from_ratio(0, 1), ex = exy, ey = exy;
  for (std::size_t i = 0; i < dist.size(); ++i) {
    int xu = ((i >> pu) & 1u) ? -1 : 1;
    int xv = ((i >> pv) & 1u) ? -1 : 1;
    const T& p = dist[i];
    if (xu * xv > 0) exy += p; else exy -= p;
    if (xu > 0) ex += p; else ex -= p;
    if (xv > 0) ey += p; else ey -= p;
  }
  return exy - ex * ey;
}

#define IFT_INSTANTIATE(T)                                                                   \
  template class JointDistribution<T>;                                                       \
  template JointDistribution<T> condition(const JointDistribution<T>&, const Assignment&);   \
  template bool distributions_equal(const JointDistribution<T>&, const JointDistribution<T>&, \
                                    double);                                                 \
  template T covariance(const JointDistribution<T>&, VertexId, VertexId);
IFT_INSTANTIATE(Rational)
IFT_INSTANTIATE(double)
#undef IFT_INSTANTIATE

}  // namespace ift
