#include <filesystem>
#include <sstream>

#include "cli.hpp"
#include "doctest.h"
#include "ift/errors.hpp"
#include "ift/io.hpp"
#include "support.hpp"

using namespace ift;
using ift::testing::R;
namespace fs = std::filesystem;

namespace {

struct TempDir {
  fs::path path;
  TempDir() : path(fs::temp_directory_path() / ("ift_cli_" + std::to_string(reinterpret_cast<std::uintptr_t>(this)))) {
    fs::create_directories(path);
  }
  ~TempDir() { fs::remove_all(path); }
  fs::path operator/(const std::string& name) const { return path / name; }
};

ErrorCode code_of(auto&& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.code();
  }
  FAIL("expected an ift::Error");
  return ErrorCode::kIo;
}

cli::RunConfig config(std::string command) {
  cli::RunConfig c;
  c.command = std::move(command);
  return c;
}

}  // namespace

TEST_CASE("metrics on the order-2 parity distribution") {
  TempDir dir;
  write_file(dir / "p.json", distribution_to_json(parity_counterexample<Rational>(2)));
  auto c = config("metrics");
  c.input = dir / "p.json";
  c.output = dir / "series.csv";
  std::ostringstream out;
  CHECK(cli::run(c, out) == 0);
  CHECK(read_file(c.output) == "metric,t,value\navgcovcond,0,0/1\navgcovcond,1,0/1\navgcovcond,2,1/1\n");
  c.metric = "avginfocond";
  c.t_range = "2..2";
  CHECK(cli::run(c, out) == 0);
  CHECK(read_file(c.output) == "metric,t,value\navginfocond,2,0.69314718055994529\n");
  c.metric = "median";
  CHECK(code_of([&] { cli::run(c, out); }) == ErrorCode::kInvalidArgument);
}

TEST_CASE("metrics on a tree uses its leaf law") {
  TempDir dir;
  write_file(dir / "star.json", tree_to_json(make_star<Rational>(std::vector<Rational>(4, R("1/2")))));
  auto c = config("metrics");
  c.input = dir / "star.json";
  c.metric = "avgcov";
  std::ostringstream out;
  CHECK(cli::run(c, out) == 0);
  CHECK(out.str() == "metric,t,value\navgcov,0,1/4\n");
}

TEST_CASE("transform to a simple caterpillar writes a valid simple caterpillar") {
  TempDir dir;
  write_file(dir / "t.json", tree_to_json(testing::example_tree()));
  auto c = config("transform");
  c.input = dir / "t.json";
  c.output = dir / "out.json";
  c.trace = dir / "trace.json";
  c.rule = "simple-caterpillar";
  std::ostringstream out;
  CHECK(cli::run(c, out) == 0);
  auto result = std::get<InfoFlowTree<Rational>>(parse_tree_json(read_file(c.output)));
  CHECK(validate(result).empty());
  CHECK(simple_caterpillar_spine(result).has_value());
  CHECK(out.str().find("\"equivalent\":true") != std::string::npos);

  auto r = config("transform");
  r.input = c.input;
  r.replay = c.trace;
  std::ostringstream replayed;
  CHECK(cli::run(r, replayed) == 0);
  CHECK(replayed.str() == read_file(c.output));
}

TEST_CASE("primitive transforms from the command line") {
  TempDir dir;
  write_file(dir / "t.json", tree_to_json(testing::example_tree()));
  std::ostringstream out;
  auto c = config("transform");
  c.input = dir / "t.json";
  c.rule = "split-edge";
  c.u = 2;
  c.v = 3;
  c.rho1 = "4/5";
  c.rho2 = "5/6";
  CHECK(cli::run(c, out) == 0);
  auto split = std::get<InfoFlowTree<Rational>>(parse_tree_json(out.str()));
  CHECK(split.rho(9, 3) == R("5/6"));

  c = config("transform");
  c.input = dir / "t.json";
  c.rule = "split-vertex";
  c.vertex = 1;
  c.attachment = cli::parse_attachment("4:1,5:2,2:2");
  std::ostringstream out2;
  CHECK(cli::run(c, out2) == 0);

  c.rule = "negate";
  c.vertex.reset();
  CHECK(code_of([&] { cli::run(c, out2); }) == ErrorCode::kInvalidArgument);
}

TEST_CASE("cond-cov with empty conditioning is the path product") {
  TempDir dir;
  write_file(dir / "two.json", tree_to_json(make_simple_caterpillar<Rational>({R("-2/3")}, {R("1/2"), R("3/4")})));
  auto c = config("cond-cov");
  c.input = dir / "two.json";
  c.u = 3;
  c.v = 4;
  c.report = dir / "report.json";
  std::ostringstream out;
  CHECK(cli::run(c, out) == 0);
  CHECK(read_file(c.report).find(R"("expectation":"1/4")") != std::string::npos);
  c.condition_on = "none";
  CHECK(cli::run(c, out) == 0);
  CHECK(read_file(c.report).find(R"("expectation":"1/4")") != std::string::npos);
}

TEST_CASE("validate reports structural problems with the invalid-tree status") {
  TempDir dir;
  write_file(dir / "bad.json", R"({"vertices":[1,2,3],"edges":[[1,2,"1/2"],[2,3,"3/2"]]})");
  auto c = config("validate");
  c.input = dir / "bad.json";
  std::ostringstream out;
  CHECK(cli::run(c, out) == static_cast<int>(ErrorCode::kInvalidTree));
  CHECK(out.str().find("correlation_out_of_range") != std::string::npos);
}

TEST_CASE("identical config and seed give byte-identical outputs") {
  TempDir dir;
  write_file(dir / "t.json", tree_to_json(testing::example_tree()));
  auto c = config("sample");
  c.input = dir / "t.json";
  c.seed = 5;
  c.count = 50;
  std::ostringstream a, b;
  cli::run(c, a);
  cli::run(c, b);
  const std::string lines = a.str();
  CHECK(lines == b.str());
  CHECK(std::count(lines.begin(), lines.end(), '\n') == 50);

  auto s = config("scan");
  s.seed = 3;
  s.trials = 12;
  s.max_size = 6;
  s.output = dir / "scan.jsonl";
  std::ostringstream summary;
  CHECK(cli::run(s, summary) == 0);
  auto first = read_file(s.output);
  s.threads = 1;
  CHECK(cli::run(s, summary) == 0);
  CHECK(read_file(s.output) == first);
  CHECK(parse_scan_records_jsonl(first).size() == 12);
  CHECK(summary.str().find("\"violations\":0") != std::string::npos);
}

TEST_CASE("configuration checks") {
  auto c = config("scan");
  std::ostringstream out;
  CHECK(code_of([&] { cli::run(c, out); }) == ErrorCode::kInvalidArgument);
  c = config("validate");
  c.max_leaves = 0;
  CHECK(code_of([&] { cli::run(c, out); }) == ErrorCode::kInvalidArgument);
  c = config("dist");
  c.tolerance = 0.0;
  CHECK(code_of([&] { cli::run(c, out); }) == ErrorCode::kInvalidArgument);
  c = config("frobnicate");
  CHECK(code_of([&] { cli::run(c, out); }) == ErrorCode::kInvalidArgument);
  c = config("dist");
  c.input = "/nonexistent/tree.json";
  CHECK(code_of([&] { cli::run(c, out); }) == ErrorCode::kIo);
}

TEST_CASE("caps are enforced") {
  TempDir dir;
  write_file(dir / "big.json", tree_to_json(make_star<Rational>(std::vector<Rational>(8, R("1/2")))));
  auto c = config("dist");
  c.input = dir / "big.json";
  c.max_leaves = 6;
  std::ostringstream out;
  CHECK(code_of([&] { cli::run(c, out); }) == ErrorCode::kCapExceeded);
  c.max_leaves = 20;
  c.max_vertices = 5;
  CHECK(code_of([&] { cli::run(c, out); }) == ErrorCode::kCapExceeded);
}

TEST_CASE("bound and counterexample commands") {
  std::ostringstream out;
  auto c = config("bound");
  c.alpha = 2.0;
  CHECK(cli::run(c, out) == 0);
  CHECK(out.str() == "1.4715177646857693\n");

  TempDir dir;
  write_file(dir / "star.json", tree_to_json(make_star<Rational>({R("1/2"), R("-1/3"), R("3/4"), R("1/5"), R("-2/7")})));
  c.alpha.reset();
  c.input = dir / "star.json";
  std::ostringstream star;
  CHECK(cli::run(c, star) == 0);
  CHECK(star.str().find(R"("expected_center_variance":"9176212384140305/28015485015271611")") != std::string::npos);
  CHECK(star.str().find(R"("within_bound":true)") != std::string::npos);

  auto p = config("counterexample");
  p.order = 3;
  p.series = dir / "series.csv";
  std::ostringstream dist;
  CHECK(cli::run(p, dist) == 0);
  auto law = std::get<JointDistribution<Rational>>(parse_distribution_json(dist.str()));
  CHECK(law.variable_count() == 5);
  auto csv = read_file(p.series);
  CHECK(csv.find("avgcovcond,3,1/1") != std::string::npos);
  CHECK(csv.find("avginfocond,3,0.69314718055994") != std::string::npos);
}

TEST_CASE("emit_report formats") {
  CHECK(cli::emit_report(std::span<const ScanRecord>(), cli::ReportFormat::kCsv).find('\n') ==
        cli::emit_report(std::span<const ScanRecord>(), cli::ReportFormat::kCsv).size() - 1);
  ScanRecord r;
  r.family = "random-tree";
  r.topology_hash = "00000000000000ff";
  r.t = 3;
  r.rhos = {0.5};
  auto line = cli::emit_report(std::span<const ScanRecord>(&r, 1), cli::ReportFormat::kJsonl);
  CHECK(std::count(line.begin(), line.end(), '\n') == 1);
  CHECK(parse_scan_record(line) == r);
  MetricSeries<Rational> s{"avgcovcond", 4, {{0, R("0")}, {1, R("1/3")}, {2, R("1")}}};
  auto csv = cli::emit_report(std::span<const MetricSeries<Rational>>(&s, 1), cli::ReportFormat::kCsv);
  CHECK(std::count(csv.begin(), csv.end(), '\n') == 4);
  auto json = cli::emit_report(std::span<const MetricSeries<Rational>>(&s, 1), cli::ReportFormat::kJson);
  CHECK(json.find(R"("value":"1/3")") != std::string::npos);
  CHECK(cli::format_for_path("a/b.csv") == cli::ReportFormat::kCsv);
  CHECK(cli::format_for_path("x.jsonl") == cli::ReportFormat::kJsonl);
  CHECK_THROWS_AS(cli::parse_report_format("xml"), Error);
}

TEST_CASE("error reports and exit codes") {
  Error e(ErrorCode::kCapExceeded, "too big");
  CHECK(cli::error_report(e) == R"({"error":"cap_exceeded","code":14,"message":"too big"})");
  CHECK(cli::exit_code(e) == 14);
  std::runtime_error other("x");
  CHECK(cli::exit_code(other) == 1);
}

TEST_CASE("argument parsers") {
  CHECK(cli::parse_t_range("1..4") == std::pair{1, 4});
  CHECK_THROWS_AS(cli::parse_t_range("4..1"), Error);
  CHECK_THROWS_AS(cli::parse_t_range("3"), Error);
  CHECK(cli::parse_id_list("3,4,5") == std::vector<VertexId>{3, 4, 5});
  CHECK_THROWS_AS(cli::parse_id_list("3,,5"), Error);
  CHECK(cli::parse_attachment("7:1,8:2") == std::map<VertexId, int>{{7, 1}, {8, 2}});
  CHECK_THROWS_AS(cli::parse_attachment("7-1"), Error);
}
