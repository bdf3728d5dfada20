#include <cmath>

#include "doctest.h"
#include "ift/bounds.hpp"
#include "ift/covariance.hpp"
#include "ift/errors.hpp"
#include "ift/metrics.hpp"
#include "support.hpp"

using namespace ift;
using ift::testing::R;

TEST_CASE("star bound") {
  CHECK(star_bound(0.0) == 4.0);
  CHECK(star_bound(2.0) == doctest::Approx(1.4715177646857693).epsilon(1e-15));
  CHECK(star_bound(2.0 * std::log(4.0)) == doctest::Approx(1.0).epsilon(1e-15));
  CHECK_THROWS_AS(star_bound(-0.1), Error);
  CHECK_THROWS_AS(star_bound(std::nan("")), Error);
}

TEST_CASE("star recognition") {
  auto star = make_star<Rational>({R("1/2"), R("-1/3"), R("3/4")});
  auto spec = star_spec(star);
  REQUIRE(spec.has_value());
  CHECK(spec->center == 0);
  CHECK(spec->alpha == R("1/4") + R("1/9") + R("9/16"));
  CHECK_FALSE(star_spec(testing::example_tree()).has_value());
  try {
    star_expected_center_variance(testing::example_tree());
    FAIL("expected precondition error");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::kPrecondition);
  }
}

TEST_CASE("expected center variance of stars") {
  CHECK(star_expected_center_variance(make_star<Rational>({R("0"), R("0"), R("0")})) == 1);
  CHECK(star_expected_center_variance(make_star<Rational>({R("1"), R("1/2")})) == 0);
  auto star = make_star<Rational>({R("1/2"), R("-1/3"), R("3/4"), R("1/5"), R("-2/7")});
  // Frozen from the fraction-based enumeration in tests/oracles.
  const Rational v("9176212384140305/28015485015271611");
  CHECK(star_expected_center_variance(star) == v);
  auto spec = *star_spec(star);
  CHECK(spec.alpha == R("184381/176400"));
  CHECK(v.get_d() <= star_bound(spec.alpha.get_d()));
  CHECK(star_bound(spec.alpha.get_d()) == doctest::Approx(2.3718553074279547).epsilon(1e-15));
}

TEST_CASE("sign statistic and its error probability") {
  std::vector<Rational> rhos{R("1/2"), R("1/2")};
  std::vector<VertexId> leaves{1, 2};
  CHECK(star_sign_statistic<Rational>(rhos, Assignment{{1, 1}, {2, -1}}, leaves) == Spin(1));
  CHECK(star_sign_statistic<Rational>(rhos, Assignment{{1, -1}, {2, -1}}, leaves) == Spin(-1));

  CounterRng rng(17);
  for (int i = 0; i < 100; ++i) {
    auto star = random_star<Rational>(rng, static_cast<int>(rng.between(1, 8)), grid_rational_sampler(8));
    auto spec = *star_spec(star);
    Rational err = star_sign_error_probability(spec);
    Rational var = star_expected_center_variance(star);
    CHECK(var / 4 <= err);
    CHECK(err.get_d() <= std::exp(-spec.alpha.get_d() / 2.0) + 1e-15);
  }
}

TEST_CASE("combinatorial star quantity") {
  CHECK(theoremC_star_quantity(std::vector<double>(6, 0.0)) == 0.0);
  CHECK(theoremC_star_quantity(std::vector<double>{0.5, -0.25}) == 0.125);
  const double ten = theoremC_star_quantity(std::vector<double>(10, 1.0));
  // Frozen from an independent double loop in tests/oracles.
  CHECK(ten == doctest::Approx(0.42220600774016359).epsilon(1e-15));
  CHECK(ten <= theoremC_constant() / 10);
  CHECK_THROWS_AS(theoremC_star_quantity(std::vector<double>{1.0}), Error);

  CounterRng rng(2);
  for (int i = 0; i < 10000; ++i) {
    int t = static_cast<int>(rng.between(2, 64));
    std::vector<double> rhos(t);
    for (auto& r : rhos) r = rng.uniform(-1.0, 1.0);
    CHECK(theoremC_star_quantity(rhos) <= theoremC_constant() / 4.0 / t);
  }
}

TEST_CASE("dyadic series and its constant") {
  CHECK(theoremC_series_term(0) == doctest::Approx(2.0 * std::exp(-0.25)).epsilon(1e-15));
  CHECK(theoremC_series_term(0) == doctest::Approx(1.5576015661428097).epsilon(1e-15));
  double partial = 0.0;
  for (int k = 0; k < 12; ++k) {
    CHECK(theoremC_series_term(k) > 0.0);
    double next = partial + theoremC_series_term(k);
    CHECK(next >= partial);
    partial = next;
  }
  // Frozen from 40-digit summation: series 9.6997087232815456926..., C = 57.8186901406452306619...
  CHECK(theoremC_constant() == 57.818690140645230662);
  CHECK(std::fabs(theoremC_constant_from_series() - theoremC_constant()) <= 1e-12);
  CHECK_THROWS_AS(theoremC_series_term(-1), Error);
}

TEST_CASE("parity counterexample") {
  for (int order = 1; order <= 4; ++order) {
    auto d = parity_counterexample<Rational>(order);
    CHECK(d.variable_count() == static_cast<std::size_t>(order + 2));
    for (VertexId l : d.labels()) CHECK(d.probability(Assignment{{l, 1}}) == R("1/2"));
  }
  auto d = parity_counterexample<Rational>(1);
  CHECK(avg_cov_cond(d, 0) == 0);
  CHECK(avg_cov_cond(d, 1) == 1);
  CHECK_THROWS_AS(parity_counterexample<Rational>(0), Error);
  try {
    parity_counterexample<Rational>(19);
    FAIL("expected cap error");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::kCapExceeded);
  }
}

TEST_CASE("simple caterpillar factorization through the spine") {
  CounterRng rng(41);
  for (int i = 0; i < 20; ++i) {
    int t = static_cast<int>(rng.between(3, 6));
    auto cat = random_simple_caterpillar<Rational>(rng, t, grid_rational_sampler(8, true), grid_rational_sampler(8));
    VertexId a = rng.between(1, t), b = rng.between(1, t);
    if (a == b) continue;
    std::vector<VertexId> rest;
    for (VertexId l : cat.leaves())
      if (l != t + a && l != t + b) rest.push_back(l);
    auto leaf_side = expected_abs_cond_cov(cat, t + a, t + b, rest).expectation;
    auto spine_side = expected_abs_cond_cov(cat, a, b, rest).expectation;
    CHECK(leaf_side == abs(cat.rho(a, t + a) * cat.rho(b, t + b)) * spine_side);
  }
}

TEST_CASE("raising spine correlations to one never lowers the conditional covariance") {
  CounterRng rng(43);
  for (int i = 0; i < 20; ++i) {
    int t = static_cast<int>(rng.between(3, 6));
    std::vector<Rational> spine(t - 1), leaf(t);
    for (auto& r : spine) r = grid_rational_sampler(8, true)(rng);
    for (auto& r : leaf) r = grid_rational_sampler(8)(rng);
    VertexId a = 1, b = t;
    std::vector<VertexId> rest;
    for (VertexId k = 2; k < t; ++k) rest.push_back(t + k);
    auto before = expected_abs_cond_cov(make_simple_caterpillar(spine, leaf), a, b, rest).expectation;
    std::fill(spine.begin(), spine.end(), Rational(1));
    auto after = expected_abs_cond_cov(make_simple_caterpillar(spine, leaf), a, b, rest).expectation;
    CHECK(after >= before);
  }
}

TEST_CASE("tree families") {
  for (auto f : {TreeFamily::kSimpleCaterpillar, TreeFamily::kDepth2Caterpillar, TreeFamily::kCompleteBinary,
                 TreeFamily::kRandomTree})
    CHECK(parse_family(family_name(f)) == f);
  CHECK_THROWS_AS(parse_family("forest"), Error);
}

TEST_CASE("topology hash ignores correlations") {
  auto a = make_simple_caterpillar<Rational>({R("1/2")}, {R("1/3"), R("1/4")});
  auto b = make_simple_caterpillar<Rational>({R("1/5")}, {R("-1/3"), R("1")});
  auto c = make_star<Rational>({R("1/2"), R("1/2")});
  CHECK(topology_hash(a).size() == 16);
  CHECK(topology_hash(a) == topology_hash(b));
  CHECK(topology_hash(a) != topology_hash(c));
}

TEST_CASE("scan is deterministic, thread-count independent and bounded on simple caterpillars") {
  ScanOptions o;
  o.trials = 40;
  o.seed = 99;
  o.max_leaves = 7;
  o.threads = 1;
  auto serial = scan_conjectureB(o);
  o.threads = 4;
  auto parallel = scan_conjectureB(o);
  CHECK(serial == parallel);
  for (std::size_t i = 0; i < serial.size(); ++i) {
    const auto& r = serial[i];
    CHECK(r.trial == i);
    CHECK(r.asserted);
    CHECK_FALSE(r.violation());
    CHECK(r.margin == r.bound - r.lhs);
    CHECK(r.bound == theoremC_constant() / r.t);
    CHECK((r.t >= 2 && r.t <= 7));
  }
  o.seed = 100;
  CHECK(scan_conjectureB(o) != serial);
}

TEST_CASE("observational families never assert") {
  for (auto f : {TreeFamily::kDepth2Caterpillar, TreeFamily::kCompleteBinary, TreeFamily::kRandomTree}) {
    ScanOptions o;
    o.family = f;
    o.trials = 10;
    o.max_leaves = 8;
    for (const auto& r : scan_conjectureB(o)) {
      CHECK_FALSE(r.asserted);
      CHECK(r.lhs >= 0.0);
      CHECK(r.family == family_name(f));
    }
  }
  ScanOptions bad;
  bad.family = TreeFamily::kCompleteBinary;
  bad.min_leaves = 5;
  bad.max_leaves = 7;
  CHECK_THROWS_AS(scan_conjectureB(bad), Error);
  ScanOptions big;
  big.max_leaves = 21;
  CHECK_THROWS_AS(scan_conjectureB(big), Error);
}
