#pragma once

#include <cstddef>
#include <cstdint>
#include <initializer_list>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "ift/errors.hpp"
#include "ift/numeric.hpp"

namespace ift {

using VertexId = std::int64_t;

/// A single +-1 value.
class Spin {
 public:
  constexpr Spin() = default;
  /// Throws kInvalidArgument unless value is +1 or -1.
  explicit Spin(int value);

  constexpr int value() const { return value_; }
  constexpr bool positive() const { return value_ > 0; }
  /// Bit-index encoding used by every dense table: +1 -> 0, -1 -> 1.
  constexpr unsigned bit() const { return value_ > 0 ? 0u : 1u; }
  constexpr Spin operator-() const { return from_bit(value_ > 0 ? 1u : 0u); }
  static constexpr Spin from_bit(unsigned bit) {
    Spin s;
    s.value_ = bit ? -1 : 1;
    return s;
  }

  friend constexpr bool operator==(Spin, Spin) = default;

 private:
  int value_ = 1;
};

/// Mapping from variable labels to +-1 values; each label appears once.
class Assignment {
 public:
  Assignment() = default;
  Assignment(std::initializer_list<std::pair<VertexId, int>> values);

  void set(VertexId label, Spin value) { values_[label] = value; }
  void set(VertexId label, int value) { values_[label] = Spin(value); }

  bool contains(VertexId label) const { return values_.count(label) != 0; }
  Spin at(VertexId label) const;
  std::size_t size() const { return values_.size(); }
  bool empty() const { return values_.empty(); }
  std::vector<VertexId> labels() const;

  /// Restriction to the labels in `keep` that this assignment covers.
  Assignment restricted(const std::vector<VertexId>& keep) const;

  auto begin() const { return values_.begin(); }
  auto end() const { return values_.end(); }

  friend bool operator==(const Assignment&, const Assignment&) = default;

 private:
  std::map<VertexId, Spin> values_;
};

template <NumericField T>
struct Edge {
  VertexId u = 0;
  VertexId v = 0;
  T rho{};

  friend bool operator==(const Edge&, const Edge&) = default;
};

/// One violated structural invariant.
struct Violation {
  enum class Kind {
    kTooFewVertices,
    kDuplicateVertex,
    kUnknownEndpoint,
    kSelfLoop,
    kCorrelationOutOfRange,
    kCycle,
    kDisconnected,
    kBadLeafLabel,
  };
  Kind kind;
  std::string message;
};

std::string_view violation_kind_name(Violation::Kind kind);

/// Undirected tree with a correlation in [-1, 1] per edge and a designated
/// leaf set. By default every degree-1 vertex is a leaf; an explicit leaf
/// list may leave some degree-1 vertices hidden.
///
/// Construction never throws on structural problems so that validate() can
/// report them; every inference entry point calls require_valid() first.
template <NumericField T>
class InfoFlowTree {
 public:
  using value_type = T;

  struct Neighbor {
    VertexId vertex;
    std::size_t edge;  // index into edges()
  };

  InfoFlowTree() = default;
  InfoFlowTree(std::vector<VertexId> vertices, std::vector<Edge<T>> edges,
               std::optional<std::vector<VertexId>> leaves = std::nullopt);

  const std::vector<VertexId>& vertices() const { return vertices_; }
  const std::vector<Edge<T>>& edges() const { return edges_; }
  const std::vector<VertexId>& leaves() const { return leaves_; }
  /// Non-leaf vertices in vertex order.
  std::vector<VertexId> internal_vertices() const;

  std::size_t vertex_count() const { return vertices_.size(); }
  bool has_vertex(VertexId v) const { return index_.count(v) != 0; }
  bool is_leaf(VertexId v) const;
  std::size_t degree(VertexId v) const { return neighbors(v).size(); }
  const std::vector<Neighbor>& neighbors(VertexId v) const;

  std::optional<std::size_t> edge_between(VertexId u, VertexId v) const;
  const T& rho(VertexId u, VertexId v) const;

  /// Unique vertex sequence from u to v inclusive.
  std::vector<VertexId> path(VertexId u, VertexId v) const;

  /// Lowest vertex id; the canonical root for sampling and dynamic programs.
  VertexId root() const;
  VertexId max_id() const;

  friend bool operator==(const InfoFlowTree& a, const InfoFlowTree& b) {
    return a.vertices_ == b.vertices_ && a.edges_ == b.edges_ && a.leaves_ == b.leaves_;
  }

 private:
  std::size_t index_of(VertexId v) const;

  std::vector<VertexId> vertices_;
  std::vector<Edge<T>> edges_;
  std::vector<VertexId> leaves_;
  std::map<VertexId, std::size_t> index_;
  std::vector<std::vector<Neighbor>> adjacency_;
};

/// Every violated invariant; empty means the tree is valid.
template <NumericField T>
std::vector<Violation> validate(const InfoFlowTree<T>& tree);

/// Throws Error(kInvalidTree) listing all violations.
template <NumericField T>
void require_valid(const InfoFlowTree<T>& tree);

/// Vertices in breadth-first order from `root`, with each vertex's parent
/// (the root's parent is itself). Neighbors listed in `blocked` are not
/// entered from `root`.
template <NumericField T>
std::vector<std::pair<VertexId, VertexId>> bfs_order(const InfoFlowTree<T>& tree, VertexId root,
                                                     const std::vector<VertexId>& blocked = {});

/// Same topology and leaves, correlations converted to doubles.
InfoFlowTree<double> to_float(const InfoFlowTree<Rational>& tree);

extern template class InfoFlowTree<Rational>;
extern template class InfoFlowTree<double>;

}  // namespace ift
