#include "doctest.h"
#include "ift/distribution.hpp"
#include "ift/errors.hpp"
#include "support.hpp"

using namespace ift;
using ift::testing::R;

namespace {
// labels {1, 2}; index bit 0 is label 1, bit 1 is label 2; +1 is bit 0.
JointDistribution<Rational> pair_law() {
  return JointDistribution<Rational>({1, 2}, {R("3/8"), R("1/8"), R("1/8"), R("3/8")});
}
}  // namespace

TEST_CASE("construction checks") {
  CHECK_NOTHROW(pair_law());
  CHECK_THROWS_AS(JointDistribution<Rational>({1, 2}, {R("1/2"), R("1/2")}), Error);
  CHECK_THROWS_AS(JointDistribution<Rational>({1, 1}, {R("1/4"), R("1/4"), R("1/4"), R("1/4")}), Error);
  CHECK_THROWS_AS(JointDistribution<Rational>({1}, {R("1/2"), R("1/3")}), Error);
  CHECK_THROWS_AS(JointDistribution<Rational>({1}, {R("3/2"), R("-1/2")}), Error);
  std::vector<VertexId> many(21);
  for (int i = 0; i < 21; ++i) many[i] = i;
  try {
    JointDistribution<Rational>(many, {}, 20);
    FAIL("expected cap error");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::kCapExceeded);
  }
  CHECK_NOTHROW(JointDistribution<double>({1}, {0.5 + 1e-13, 0.5}));
  CHECK_THROWS_AS(JointDistribution<double>({1}, {0.5 + 1e-9, 0.5}), Error);
}

TEST_CASE("indexing and probability lookup") {
  auto d = pair_law();
  CHECK(d.size() == 4);
  CHECK(d.position(2) == 1);
  CHECK(d.index_of(Assignment{{1, -1}, {2, 1}}) == 1);
  CHECK(d.assignment_at(2) == Assignment{{1, 1}, {2, -1}});
  CHECK(d.probability(Assignment{{1, 1}}) == R("1/2"));
  CHECK(d.probability(Assignment{}) == R("1"));
  CHECK(d.probability(Assignment{{1, 1}, {2, 1}}) == R("3/8"));
}

TEST_CASE("marginal, reorder, condition") {
  auto d = pair_law();
  auto m = d.marginal({2});
  CHECK(m.labels() == std::vector<VertexId>{2});
  CHECK(m[0] == R("1/2"));
  auto r = d.reordered({2, 1});
  CHECK(distributions_equal(d, r));
  auto c = condition(d, Assignment{{1, -1}});
  CHECK(c.labels() == std::vector<VertexId>{2});
  CHECK(c[0] == R("1/4"));
  CHECK(c[1] == R("3/4"));

  JointDistribution<Rational> z({1, 2}, {R("1/2"), R("0"), R("0"), R("1/2")});
  try {
    condition(z, Assignment{{1, 1}, {2, -1}});
    FAIL("expected zero-probability error");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::kZeroProbability);
  }
  CHECK_THROWS_AS(condition(d, Assignment{{7, 1}}), Error);
}

TEST_CASE("table covariance") {
  CHECK(covariance(pair_law(), 1, 2) == R("1/2"));
  JointDistribution<Rational> indep({1, 2}, {R("1/4"), R("1/4"), R("1/4"), R("1/4")});
  CHECK(covariance(indep, 1, 2) == 0);
  CHECK(covariance(indep, 1, 1) == 1);
}

TEST_CASE("float conversion and tolerance comparison") {
  auto f = to_float(pair_law());
  CHECK(f[0] == doctest::Approx(0.375));
  JointDistribution<double> g({1, 2}, {0.375 + 1e-14, 0.125, 0.125, 0.375 - 1e-14});
  CHECK(distributions_equal(f, g));
  CHECK_FALSE(distributions_equal(f, g, 1e-16));
}
