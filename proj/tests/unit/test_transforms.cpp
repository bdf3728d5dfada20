#include "doctest.h"
#include "ift/errors.hpp"
#include "ift/inference.hpp"
#include "ift/transforms.hpp"
#include "support.hpp"

using namespace ift;
using ift::testing::R;

namespace {

ErrorCode code_of(auto&& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.code();
  }
  FAIL("expected an ift::Error");
  return ErrorCode::kIo;
}

template <NumericField T>
bool is_rooted_binary(const InfoFlowTree<T>& t, VertexId root) {
  for (VertexId v : t.internal_vertices()) {
    std::size_t want = v == root ? 2 : 3;
    if (t.degree(v) != want) return false;
  }
  return true;
}

}  // namespace

TEST_CASE("rule names round-trip") {
  for (auto r : {Rule::kNegateInternalVertex, Rule::kNormalizeInternalSigns, Rule::kMergeDegree2, Rule::kSplitEdge,
                 Rule::kContractUnitSubgraph, Rule::kSplitVertex, Rule::kToBinary, Rule::kToSimpleCaterpillar,
                 Rule::kPruneHiddenPendant})
    CHECK(parse_rule(rule_name(r)) == r);
  CHECK_THROWS_AS(parse_rule("bogus"), Error);
}

TEST_CASE("negating an internal vertex preserves the leaf law") {
  auto t = testing::example_tree();
  auto n = negate_internal_vertex(t, 2);
  CHECK(n.rho(1, 2) == R("-1/2"));
  CHECK(n.rho(2, 6) == R("-3/4"));
  CHECK(n.rho(1, 4) == R("1/3"));
  CHECK(check_equivalence(t, n));
  CHECK(code_of([&] { negate_internal_vertex(t, 4); }) == ErrorCode::kPrecondition);
  CHECK_THROWS_AS(negate_internal_vertex(t, 42), Error);
}

TEST_CASE("sign normalization leaves no negative internal edge") {
  CounterRng rng(3);
  for (int trial = 0; trial < 40; ++trial) {
    auto t = testing::random_grid_tree(rng, 9);
    auto res = normalize_internal_signs(t);
    for (const auto& e : res.tree.edges())
      if (!res.tree.is_leaf(e.u) && !res.tree.is_leaf(e.v)) CHECK(e.rho >= 0);
    CHECK(check_equivalence(t, res.tree));
    CHECK(replay(t, res.trace) == res.tree);
  }
}

TEST_CASE("merging a degree-2 vertex multiplies correlations") {
  auto t = make_path<Rational>({R("1/2"), R("-2/3")});
  auto m = merge_degree2(t, 2);
  CHECK(m.vertex_count() == 2);
  CHECK(m.rho(1, 3) == R("-1/3"));
  CHECK(check_equivalence(t, m));
  CHECK(code_of([&] { merge_degree2(t, 1); }) == ErrorCode::kPrecondition);
  auto e = testing::example_tree();
  CHECK(code_of([&] { merge_degree2(e, 1); }) == ErrorCode::kPrecondition);
}

TEST_CASE("splitting an edge with factors whose product is the correlation") {
  auto t = testing::example_tree();
  auto s = split_edge(t, 2, 3, R("4/5"), R("5/6"));
  CHECK(s.has_vertex(9));
  CHECK(s.rho(2, 9) == R("4/5"));
  CHECK(s.rho(9, 3) == R("5/6"));
  CHECK_FALSE(s.edge_between(2, 3));
  CHECK(check_equivalence(t, s));
  CHECK(code_of([&] { split_edge(t, 2, 3, R("1/2"), R("1/2")); }) == ErrorCode::kInvalidArgument);
  CHECK(code_of([&] { split_edge(t, 2, 3, R("4/3"), R("1/2")); }) == ErrorCode::kInvalidArgument);
  CHECK(code_of([&] { split_edge(t, 4, 5, R("1"), R("1")); }) == ErrorCode::kInvalidArgument);
  // Leaf edges may be split too; the leaf set is unchanged.
  auto l = split_edge(t, 1, 4, R("1/3"), R("1"));
  CHECK(l.leaves() == t.leaves());
  CHECK(check_equivalence(t, l));
}

TEST_CASE("contracting a correlation-1 internal subgraph") {
  InfoFlowTree<Rational> t({1, 2, 3, 4, 5, 6},
                           {{1, 2, R("1")}, {1, 3, R("1/2")}, {1, 4, R("-1/3")}, {2, 5, R("2/3")}, {2, 6, R("1/4")}});
  auto c = contract_unit_subgraph(t, {2, 1});
  CHECK(c.vertex_count() == 5);
  CHECK(c.degree(1) == 4);
  CHECK(c.rho(1, 5) == R("2/3"));
  CHECK(check_equivalence(t, c));
  auto e = testing::example_tree();
  CHECK(code_of([&] { contract_unit_subgraph(e, {1, 2}); }) == ErrorCode::kPrecondition);
  CHECK(code_of([&] { contract_unit_subgraph(t, {1, 3}); }) == ErrorCode::kPrecondition);
  CHECK(code_of([&] { contract_unit_subgraph(t, {2, 3}); }) == ErrorCode::kPrecondition);
}

TEST_CASE("splitting a vertex into a correlation-1 path") {
  auto star = make_star<Rational>({R("1/2"), R("-1/3"), R("3/4"), R("1/5")});
  auto s = split_vertex(star, 0, 3, {{1, 1}, {2, 2}, {3, 3}, {4, 3}});
  CHECK(s.vertex_count() == 7);
  CHECK(s.rho(0, 5) == 1);
  CHECK(s.rho(5, 6) == 1);
  CHECK(s.rho(5, 2) == R("-1/3"));
  CHECK(s.rho(6, 4) == R("1/5"));
  CHECK(check_equivalence(star, s));
  CHECK(code_of([&] { split_vertex(star, 0, 2, {{1, 1}, {2, 2}}); }) == ErrorCode::kInvalidArgument);
  CHECK(code_of([&] { split_vertex(star, 0, 2, {{1, 1}, {2, 2}, {3, 3}, {4, 1}}); }) == ErrorCode::kInvalidArgument);
  CHECK(code_of([&] { split_vertex(star, 1, 2, {{0, 1}}); }) == ErrorCode::kPrecondition);
}

TEST_CASE("pruning a hidden pendant") {
  InfoFlowTree<Rational> t({1, 2, 3, 4}, {{1, 2, R("1/2")}, {2, 3, R("1/3")}, {2, 4, R("1/4")}},
                           std::vector<VertexId>{3, 4});
  auto p = prune_hidden_pendant(t, 1);
  CHECK(p.vertex_count() == 3);
  CHECK(check_equivalence(t, p));
  CHECK(code_of([&] { prune_hidden_pendant(t, 3); }) == ErrorCode::kPrecondition);
  CHECK(code_of([&] { prune_hidden_pendant(t, 2); }) == ErrorCode::kPrecondition);
}

TEST_CASE("binary form on random trees") {
  CounterRng rng(5);
  for (int trial = 0; trial < 60; ++trial) {
    auto t = testing::random_grid_tree(rng, 9);
    auto res = to_binary(t);
    const VertexId root = binary_root(res);
    CHECK(res.tree.has_vertex(root));
    CHECK(is_rooted_binary(res.tree, root));
    CHECK(res.tree.leaves() == t.leaves());
    CHECK(check_equivalence(t, res.tree));
    CHECK(replay(t, res.trace) == res.tree);
  }
}

TEST_CASE("binary form of the smallest tree") {
  InfoFlowTree<Rational> t({0, 1}, {{0, 1, R("1/2")}});
  auto res = to_binary(t);
  CHECK(res.tree.vertex_count() == 3);
  CHECK(is_rooted_binary(res.tree, binary_root(res)));
  CHECK(check_equivalence(t, res.tree));
}

TEST_CASE("caterpillar spines") {
  auto e = testing::example_tree();
  CHECK(caterpillar_spine(e) == std::vector<VertexId>{1, 2, 3});
  CHECK_FALSE(simple_caterpillar_spine(e).has_value());
  auto sc = make_simple_caterpillar<Rational>({R("1/2"), R("1/2")}, {R("1/3"), R("1/3"), R("1/3")});
  CHECK(simple_caterpillar_spine(sc) == std::vector<VertexId>{1, 2, 3});
  auto bin = make_complete_binary<Rational>(3, R("1/2"));
  CHECK_FALSE(caterpillar_spine(bin).has_value());
}

TEST_CASE("simple caterpillar form of the example tree") {
  auto t = testing::example_tree();
  auto res = to_simple_caterpillar(t);
  auto spine = simple_caterpillar_spine(res.tree);
  REQUIRE(spine.has_value());
  CHECK(spine->size() == 5);
  CHECK(res.tree.leaves() == t.leaves());
  CHECK(check_equivalence(t, res.tree));
  CHECK(replay(t, res.trace) == res.tree);
}

TEST_CASE("simple caterpillar form on random caterpillars and stars") {
  CounterRng rng(9);
  for (int trial = 0; trial < 60; ++trial) {
    int spine = static_cast<int>(rng.between(1, 4));
    int leaves = static_cast<int>(rng.between(std::max(2, spine), 8));
    auto t = random_caterpillar<Rational>(rng, spine, leaves, grid_rational_sampler(8), grid_rational_sampler(8));
    auto res = to_simple_caterpillar(t);
    CHECK(simple_caterpillar_spine(res.tree).has_value());
    CHECK(check_equivalence(t, res.tree));
  }
  InfoFlowTree<Rational> two({0, 1}, {{0, 1, R("1/2")}});
  auto res = to_simple_caterpillar(two);
  CHECK(simple_caterpillar_spine(res.tree).has_value());
  CHECK(check_equivalence(two, res.tree));
}

TEST_CASE("non-caterpillars are rejected") {
  auto bin = make_complete_binary<Rational>(3, R("1/2"));
  CHECK(code_of([&] { to_simple_caterpillar(bin); }) == ErrorCode::kPrecondition);
}

TEST_CASE("recorded steps replay exactly") {
  auto t = testing::example_tree();
  TransformStep<Rational> req;
  req.rule = Rule::kSplitEdge;
  req.vertices = {2, 3};
  req.after = {{2, 0, R("2/3")}, {0, 3, R("1")}};
  auto res = apply_recorded(t, req);
  REQUIRE(res.trace.steps.size() == 1);
  CHECK(res.trace.steps[0].vertices == std::vector<VertexId>{2, 3, 9});
  CHECK(apply_step(t, res.trace.steps[0]) == res.tree);
  CHECK_THROWS_AS(apply_step(t, TransformStep<Rational>{Rule::kToBinary, {}, {}, {}, {}}), Error);
}

TEST_CASE("equivalence detects changed laws and mismatched leaves") {
  auto t = testing::example_tree();
  auto changed = t;
  changed = InfoFlowTree<Rational>(t.vertices(),
                                   {{1, 2, R("1/2")}, {2, 3, R("2/3")}, {1, 4, R("1/3")}, {1, 5, R("-1/2")},
                                    {2, 6, R("3/4")}, {3, 7, R("1/5")}, {3, 8, R("2/5")}});
  CHECK_FALSE(check_equivalence(t, changed));
  auto other = make_star<Rational>({R("1/2"), R("1/2")});
  CHECK_THROWS_AS(check_equivalence(t, other), Error);
}

TEST_CASE("float mode transforms agree within tolerance") {
  auto t = testing::example_tree<double>();
  auto res = to_simple_caterpillar(t);
  CHECK(check_equivalence(t, res.tree, 1e-12));
}
