#include <iostream>

#include "CLI11.hpp"
#include "cli.hpp"

namespace {

using ift::cli::RunConfig;

void add_common(CLI::App& sub, RunConfig& c, std::string& mode) {
  sub.add_option("--mode", mode, "Numeric mode: auto, rational or float")->default_val("auto");
  sub.add_option("--max-leaves", c.max_leaves, "Leaf cap for 2^n tables")->default_val(c.max_leaves);
  sub.add_option("--max-vertices", c.max_vertices, "Vertex cap for full enumeration")->default_val(c.max_vertices);
  sub.add_option("--tolerance", c.tolerance, "Float-mode comparison tolerance")->default_val(c.tolerance);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Exact inference and bound checks for information flow trees"};
  app.require_subcommand(1);
  RunConfig c;
  std::string mode = "auto";
  std::string condition_on, vertices, attach;
  std::optional<std::uint64_t> seed;

  auto* validate = app.add_subcommand("validate", "Check the structural invariants of a tree");
  validate->add_option("--in", c.input, "Tree JSON")->required();
  validate->add_option("--out", c.output, "Report path (default stdout)");

  auto* sample = app.add_subcommand("sample", "Draw vertex and edge samples");
  sample->add_option("--in", c.input, "Tree JSON")->required();
  sample->add_option("--seed", seed, "Master seed")->required();
  sample->add_option("--count", c.count, "Number of samples")->default_val(1);
  sample->add_option("--out", c.output, "JSONL output (default stdout)");

  auto* dist = app.add_subcommand("dist", "Exact joint law of the leaves or of all vertices");
  dist->add_option("--in", c.input, "Tree JSON")->required();
  dist->add_option("--scope", c.scope, "leaves or vertices")->default_val("leaves");
  dist->add_option("--out", c.output, "Distribution JSON (default stdout)");

  auto* cond = app.add_subcommand("cond-cov", "Expected |conditional covariance| of two vertices");
  cond->add_option("--in", c.input, "Tree JSON")->required();
  cond->add_option("--u", c.u, "First vertex")->required();
  cond->add_option("--v", c.v, "Second vertex")->required();
  cond->add_option("--condition-on", condition_on, "all-other-leaves, none, or a comma list of leaves")
      ->default_val("all-other-leaves");
  cond->add_option("--report", c.report, "Report JSON (default stdout)");

  auto* metrics = app.add_subcommand("metrics", "Average (conditional) covariance or information series");
  metrics->add_option("--in", c.input, "Tree or distribution JSON")->required();
  metrics->add_option("--metric", c.metric, "avgcovcond, avginfocond or avgcov")->default_val("avgcovcond");
  metrics->add_option("--t-range", c.t_range, "Conditioning orders a..b (default 0..n-2)");
  metrics->add_option("--out", c.output, "CSV output (default stdout)");

  auto* transform = app.add_subcommand("transform", "Apply a leaf-law-preserving rewrite");
  transform->add_option("--in", c.input, "Tree JSON")->required();
  transform->add_option("--rule", c.rule,
                        "negate, normalize-signs, merge, split-edge, contract, split-vertex, prune, binary, "
                        "simple-caterpillar");
  transform->add_option("--replay", c.replay, "Apply a recorded trace instead of a rule");
  transform->add_option("--vertex", c.vertex, "Vertex argument");
  transform->add_option("--u", c.u, "split-edge endpoint");
  transform->add_option("--v", c.v, "split-edge endpoint");
  transform->add_option("--rho1", c.rho1, "split-edge correlation on the u side");
  transform->add_option("--rho2", c.rho2, "split-edge correlation on the v side");
  transform->add_option("--vertices", vertices, "contract: comma list of vertices");
  transform->add_option("--attach", attach, "split-vertex: neighbor:position list");
  transform->add_option("--out", c.output, "Tree JSON output (default stdout)");
  transform->add_option("--trace", c.trace, "Trace JSON output");

  auto* bound = app.add_subcommand("bound", "Star variance bound 4 exp(-alpha/2)");
  bound->add_option("--alpha", c.alpha, "Sum of squared leaf correlations");
  bound->add_option("--in", c.input, "Star tree JSON: report exact variance against the bound");
  bound->add_option("--out", c.output, "Output path (default stdout)");

  auto* scan = app.add_subcommand("scan", "Random search for violations of the O(1/t) bound");
  scan->add_option("--family", c.family, "simple-caterpillar, depth2-caterpillar, complete-binary, random-tree")
      ->default_val("simple-caterpillar");
  scan->add_option("--trials", c.trials, "Number of trials")->default_val(100);
  scan->add_option("--seed", seed, "Master seed")->required();
  scan->add_option("--min-size", c.min_size, "Minimum number of leaves")->default_val(2);
  scan->add_option("--max-size", c.max_size, "Maximum number of leaves")->default_val(8);
  scan->add_option("--threads", c.threads, "Worker threads (0: IFT_THREADS or hardware)")->default_val(0);
  scan->add_option("--format", c.format, "csv, json or jsonl (default from --out extension)");
  scan->add_option("--out", c.output, "Records output (default stdout)");

  auto* counter = app.add_subcommand("counterexample", "Parity law whose average covariance jumps at order T");
  counter->add_option("--order", c.order, "T >= 1")->required();
  counter->add_option("--series", c.series, "Also write avgcovcond and avginfocond for t = 0..T as CSV");
  counter->add_option("--out", c.output, "Distribution JSON (default stdout)");

  for (auto* sub : app.get_subcommands({})) add_common(*sub, c, mode);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) return app.exit(e);
    std::cerr << ift::cli::error_report(ift::Error(ift::ErrorCode::kInvalidArgument, e.what())) << '\n';
    return static_cast<int>(ift::ErrorCode::kInvalidArgument);
  }

  try {
    c.command = app.get_subcommands().front()->get_name();
    c.mode = ift::parse_numeric_mode(mode);
    c.seed = seed;
    if (!condition_on.empty()) c.condition_on = condition_on;
    if (!vertices.empty()) c.vertices = ift::cli::parse_id_list(vertices);
    if (!attach.empty()) c.attachment = ift::cli::parse_attachment(attach);
    return ift::cli::run(c, std::cout);
  } catch (const std::exception& e) {
    std::cerr << ift::cli::error_report(e) << '\n';
    return ift::cli::exit_code(e);
  }
}
