#include <algorithm>
#include <filesystem>

#include "doctest.h"
#include "ift/errors.hpp"
#include "ift/io.hpp"
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
}  // namespace

TEST_CASE("tree JSON round-trips in both modes") {
  auto t = testing::example_tree();
  auto text = tree_to_json(t);
  CHECK(text.find("\"1/2\"") != std::string::npos);
  auto back = parse_tree_json(text);
  REQUIRE(std::holds_alternative<InfoFlowTree<Rational>>(back));
  CHECK(std::get<InfoFlowTree<Rational>>(back) == t);

  InfoFlowTree<double> f({1, 2, 3}, {{1, 2, 0.1}, {2, 3, -1.0 / 3.0}});
  auto ftext = tree_to_json(f);
  CHECK(ftext.find("0.10000000000000001") != std::string::npos);
  auto fback = parse_tree_json(ftext);
  REQUIRE(std::holds_alternative<InfoFlowTree<double>>(fback));
  CHECK(std::get<InfoFlowTree<double>>(fback) == f);
}

TEST_CASE("numeric mode selection") {
  const std::string mixed = R"({"vertices":[1,2,3],"edges":[[1,2,"1/2"],[2,3,0.5]]})";
  CHECK(code_of([&] { parse_tree_json(mixed); }) == ErrorCode::kFormat);
  CHECK(std::holds_alternative<InfoFlowTree<Rational>>(parse_tree_json(mixed, NumericMode::kRational)));
  auto f = parse_tree_json(mixed, NumericMode::kFloat);
  REQUIRE(std::holds_alternative<InfoFlowTree<double>>(f));
  CHECK(std::get<InfoFlowTree<double>>(f).rho(1, 2) == 0.5);
  auto exact = std::get<InfoFlowTree<Rational>>(parse_tree_json(mixed, NumericMode::kRational));
  CHECK(exact.rho(2, 3) == R("1/2"));
  CHECK(parse_numeric_mode("float") == NumericMode::kFloat);
  CHECK_THROWS_AS(parse_numeric_mode("decimal"), Error);
}

TEST_CASE("explicit leaves survive and malformed documents are format errors") {
  auto t = parse_tree_json(R"({"vertices":[1,2,3],"edges":[[1,2,"1/2"],[2,3,"1/3"]],"leaves":[3]})");
  CHECK(std::get<InfoFlowTree<Rational>>(t).leaves() == std::vector<VertexId>{3});
  CHECK(code_of([] { parse_tree_json("{"); }) == ErrorCode::kFormat);
  CHECK(code_of([] { parse_tree_json(R"({"vertices":[1,2]})"); }) == ErrorCode::kFormat);
  CHECK(code_of([] { parse_tree_json(R"({"vertices":[1,2],"edges":[[1,2]]})"); }) == ErrorCode::kFormat);
  CHECK(code_of([] { parse_tree_json(R"({"vertices":[1,"x"],"edges":[]})"); }) == ErrorCode::kFormat);
  CHECK(code_of([] { parse_tree_json(R"({"vertices":[1,2],"edges":[[1,2,"1/0"]]})"); }) == ErrorCode::kFormat);
  CHECK(code_of([] { parse_tree_json(R"({"vertices":[1,2],"edges":[[1,2,true]]})"); }) == ErrorCode::kFormat);
}

TEST_CASE("structural problems parse and are left to validation") {
  auto t = parse_tree_json(R"({"vertices":[1,2,3],"edges":[[1,2,"1/2"],[2,3,"1/2"],[3,1,"1/2"]]})");
  CHECK_FALSE(validate(std::get<InfoFlowTree<Rational>>(t)).empty());
}

TEST_CASE("distribution JSON round-trips") {
  JointDistribution<Rational> d({5, 9}, {R("3/8"), R("1/8"), R("1/8"), R("3/8")});
  auto back = parse_distribution_json(distribution_to_json(d));
  CHECK(std::get<JointDistribution<Rational>>(back) == d);
  JointDistribution<double> f({1}, {0.3, 0.7});
  CHECK(std::get<JointDistribution<double>>(parse_distribution_json(distribution_to_json(f))) == f);
  CHECK(code_of([] { parse_distribution_json(R"({"labels":[1],"probs":["1/2","1/3"]})"); }) ==
        ErrorCode::kInvalidArgument);
  CHECK(document_kind(distribution_to_json(d)) == DocumentKind::kDistribution);
  CHECK(document_kind(tree_to_json(testing::example_tree())) == DocumentKind::kTree);
  CHECK(code_of([] { document_kind("[]"); }) == ErrorCode::kFormat);
}

TEST_CASE("trace JSON round-trips") {
  auto res = to_simple_caterpillar(testing::example_tree());
  auto text = trace_to_json(res.trace);
  auto back = parse_trace_json<Rational>(text);
  CHECK(back == res.trace);
  CHECK(replay(testing::example_tree(), back) == res.tree);
  auto fres = to_binary(testing::example_tree<double>());
  CHECK(parse_trace_json<double>(trace_to_json(fres.trace)) == fres.trace);
  CHECK(code_of([] { parse_trace_json<Rational>(R"({"steps":[{"rule":"spin","vertices":[]}]})"); }) ==
        ErrorCode::kFormat);
}

TEST_CASE("scan records round-trip through JSONL") {
  ScanRecord r;
  r.trial = 3;
  r.seed = 18446744073709551615ULL;
  r.family = "simple-caterpillar";
  r.topology_hash = "0123456789abcdef";
  r.t = 4;
  r.rhos = {0.1, -1.0 / 3.0, 1.0};
  r.lhs = 0.123456789012345678;
  r.bound = 57.818690140645230662 / 4;
  r.margin = r.bound - r.lhs;
  r.lhs_times_t = r.lhs * 4;
  r.asserted = true;
  auto line = scan_record_to_json(r);
  CHECK(line.find('\n') == std::string::npos);
  CHECK(parse_scan_record(line) == r);
  std::vector<ScanRecord> two{r, r};
  two[1].trial = 4;
  CHECK(parse_scan_records_jsonl(scan_records_to_jsonl(two)) == two);
  CHECK(parse_scan_records_jsonl("").empty());
  auto empty = scan_records_to_csv(std::span<const ScanRecord>());
  CHECK(std::count(empty.begin(), empty.end(), '\n') == 1);
}

TEST_CASE("metric CSV") {
  MetricSeries<Rational> s{"avgcovcond", 4, {{0, R("0")}, {1, R("0")}, {2, R("1")}}};
  CHECK(metric_series_to_csv(std::span<const MetricSeries<Rational>>(&s, 1)) ==
        "metric,t,value\navgcovcond,0,0/1\navgcovcond,1,0/1\navgcovcond,2,1/1\n");
  CHECK(metric_series_to_csv(std::span<const MetricSeries<double>>()) == "metric,t,value\n");
}

TEST_CASE("reports") {
  CHECK(violations_to_json({}) == R"({"valid":true,"violations":[]})");
  auto rep = expected_abs_cond_cov(make_star<Rational>({R("1/2"), R("1/2")}), 1, 2, {});
  auto text = cond_cov_report_to_json(rep);
  CHECK(text.find(R"("expectation":"1/4")") != std::string::npos);
  auto s = sample_to_json(sample(testing::example_tree(), 1));
  CHECK(s.find("\"seed\":1") != std::string::npos);
}

TEST_CASE("file helpers") {
  auto dir = std::filesystem::temp_directory_path() / "ift_io_test";
  std::filesystem::create_directories(dir);
  write_file(dir / "x.txt", "hello");
  CHECK(read_file(dir / "x.txt") == "hello");
  CHECK(code_of([&] { read_file(dir / "missing.txt"); }) == ErrorCode::kIo);
  CHECK(code_of([&] { write_file(dir / "no" / "such" / "dir.txt", "x"); }) == ErrorCode::kIo);
  std::filesystem::remove_all(dir);
}
