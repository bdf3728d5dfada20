#include "cli.hpp"

#include <charconv>
#include <ostream>
#include <sstream>
#include <variant>

#include "ift/covariance.hpp"
#include "ift/errors.hpp"
#include "ift/inference.hpp"
#include "ift/rng.hpp"
#include "ift/transforms.hpp"

namespace ift::cli {

namespace {

// Flat JSON object with fields in insertion order.
class JsonObject {
 public:
  JsonObject& raw(std::string_view key, std::string_view json) {
    body_ += (body_.empty() ? "" : ",") + json_string(key) + ":" + std::string(json);
    return *this;
  }
  JsonObject& str(std::string_view key, std::string_view value) { return raw(key, json_string(value)); }
  JsonObject& num(std::string_view key, double value) { return raw(key, json_number(value)); }
  JsonObject& integer(std::string_view key, long long value) { return raw(key, std::to_string(value)); }
  JsonObject& boolean(std::string_view key, bool value) { return raw(key, value ? "true" : "false"); }
  std::string done() const { return "{" + body_ + "}"; }

 private:
  std::string body_;
};

template <NumericField T>
std::string value_json(const T& x) {
  if constexpr (Field<T>::kExact) return json_string(Field<T>::to_string(x));
  else return json_number(x);
}

long long parse_integer(std::string_view text, std::string_view what) {
  long long value = 0;
  auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
  if (ec != std::errc() || ptr != text.data() + text.size())
    throw Error(ErrorCode::kInvalidArgument, std::string(what) + ": '" + std::string(text) + "' is not an integer");
  return value;
}

void emit(const RunConfig& config, std::ostream& out, std::string_view text) {
  if (config.output.empty()) {
    out << text;
    if (!text.empty() && text.back() != '\n') out << '\n';
  } else {
    std::string content(text);
    if (!content.empty() && content.back() != '\n') content += '\n';
    write_file(config.output, content);
  }
}

AnyTree load_tree(const RunConfig& config) {
  if (config.input.empty()) throw Error(ErrorCode::kInvalidArgument, "--in is required");
  return parse_tree_json(read_file(config.input), config.mode);
}

template <NumericField T>
void check_caps(const InfoFlowTree<T>& tree, const RunConfig& config) {
  require_valid(tree);
  if (tree.leaves().size() > config.max_leaves)
    throw Error(ErrorCode::kCapExceeded, std::to_string(tree.leaves().size()) + " leaves exceed cap " +
                                             std::to_string(config.max_leaves));
  if (tree.vertex_count() > config.max_vertices)
    throw Error(ErrorCode::kCapExceeded, std::to_string(tree.vertex_count()) + " vertices exceed cap " +
                                             std::to_string(config.max_vertices));
}

int run_validate(const RunConfig& config, std::ostream& out) {
  auto any = load_tree(config);
  auto violations = std::visit([](const auto& tree) { return validate(tree); }, any);
  emit(config, out, violations_to_json(violations));
  return violations.empty() ? 0 : static_cast<int>(ErrorCode::kInvalidTree);
}

int run_sample(const RunConfig& config, std::ostream& out) {
  auto any = load_tree(config);
  std::string text;
  std::visit(
      [&](const auto& tree) {
        check_caps(tree, config);
        const CounterRng master(*config.seed);
        for (std::uint64_t i = 0; i < config.count; ++i) text += sample_to_json(sample(tree, master.child_seed(i))) + "\n";
      },
      any);
  emit(config, out, text);
  return 0;
}

int run_dist(const RunConfig& config, std::ostream& out) {
  auto any = load_tree(config);
  std::string text = std::visit(
      [&](const auto& tree) {
        check_caps(tree, config);
        if (config.scope == "leaves") return distribution_to_json(leaf_distribution(tree, config.max_leaves));
        if (config.scope == "vertices")
          return distribution_to_json(joint_distribution(tree, tree.vertices(), config.max_vertices));
        throw Error(ErrorCode::kInvalidArgument, "--scope must be leaves or vertices");
      },
      any);
  emit(config, out, text);
  return 0;
}

int run_cond_cov(const RunConfig& config, std::ostream& out) {
  if (!config.u || !config.v) throw Error(ErrorCode::kInvalidArgument, "--u and --v are required");
  auto any = load_tree(config);
  std::string text = std::visit(
      [&](const auto& tree) {
        check_caps(tree, config);
        std::vector<VertexId> conditioning;
        if (config.condition_on == "all-other-leaves") {
          for (VertexId l : tree.leaves())
            if (l != *config.u && l != *config.v) conditioning.push_back(l);
        } else if (config.condition_on != "none" && !config.condition_on.empty()) {
          conditioning = parse_id_list(config.condition_on);
        }
        return cond_cov_report_to_json(
            expected_abs_cond_cov(tree, *config.u, *config.v, conditioning, config.max_leaves));
      },
      any);
  RunConfig target = config;
  if (!config.report.empty()) target.output = config.report;
  emit(target, out, text);
  return 0;
}

template <NumericField T>
std::string metric_csv(const JointDistribution<T>& dist, const RunConfig& config) {
  const int n = static_cast<int>(dist.variable_count());
  auto [first, last] = config.t_range.empty() ? std::pair{0, n - 2} : parse_t_range(config.t_range);
  if (config.metric == "avgcov") {
    MetricSeries<T> s{"avgcov", dist.variable_count(), {{0, avg_covariance(dist)}}};
    return emit_report(std::span<const MetricSeries<T>>(&s, 1), ReportFormat::kCsv);
  }
  if (config.metric == "avgcovcond") {
    auto s = avg_cov_cond_series(dist, first, last);
    return emit_report(std::span<const MetricSeries<T>>(&s, 1), ReportFormat::kCsv);
  }
  if (config.metric == "avginfocond") {
    auto s = avg_info_cond_series(dist, first, last);
    return emit_report(std::span<const MetricSeries<double>>(&s, 1), ReportFormat::kCsv);
  }
  throw Error(ErrorCode::kInvalidArgument, "--metric must be avgcovcond, avginfocond or avgcov");
}

int run_metrics(const RunConfig& config, std::ostream& out) {
  if (config.input.empty()) throw Error(ErrorCode::kInvalidArgument, "--in is required");
  const std::string text = read_file(config.input);
  AnyDistribution dist;
  if (document_kind(text) == DocumentKind::kDistribution) {
    dist = parse_distribution_json(text, config.mode, config.max_leaves);
  } else {
    dist = std::visit(
        [&](const auto& tree) -> AnyDistribution {
          check_caps(tree, config);
          return leaf_distribution(tree, config.max_leaves);
        },
        parse_tree_json(text, config.mode));
  }
  emit(config, out, std::visit([&](const auto& d) { return metric_csv(d, config); }, dist));
  return 0;
}

template <NumericField T>
TransformResult<T> transform_tree(const InfoFlowTree<T>& tree, const RunConfig& config) {
  if (!config.replay.empty()) {
    auto trace = parse_trace_json<T>(read_file(config.replay));
    return {replay(tree, trace), trace};
  }
  if (config.rule.empty()) throw Error(ErrorCode::kInvalidArgument, "--rule or --replay is required");
  const Rule rule = parse_rule(config.rule);
  auto need_vertex = [&] {
    if (!config.vertex) throw Error(ErrorCode::kInvalidArgument, "rule '" + config.rule + "' needs --vertex");
    return *config.vertex;
  };
  TransformStep<T> step;
  step.rule = rule;
  switch (rule) {
    case Rule::kNormalizeInternalSigns: return normalize_internal_signs(tree);
    case Rule::kToBinary: return to_binary(tree);
    case Rule::kToSimpleCaterpillar: return to_simple_caterpillar(tree);
    case Rule::kNegateInternalVertex:
    case Rule::kMergeDegree2:
    case Rule::kPruneHiddenPendant:
      step.vertices = {need_vertex()};
      break;
    case Rule::kSplitEdge: {
      if (!config.u || !config.v || config.rho1.empty() || config.rho2.empty())
        throw Error(ErrorCode::kInvalidArgument, "split-edge needs --u, --v, --rho1 and --rho2");
      step.vertices = {*config.u, *config.v};
      step.after = {{*config.u, 0, correlation_from_string<T>(config.rho1)},
                    {0, *config.v, correlation_from_string<T>(config.rho2)}};
      break;
    }
    case Rule::kContractUnitSubgraph:
      if (config.vertices.empty()) throw Error(ErrorCode::kInvalidArgument, "contract needs --vertices");
      step.vertices = config.vertices;
      break;
    case Rule::kSplitVertex:
      if (config.attachment.empty()) throw Error(ErrorCode::kInvalidArgument, "split-vertex needs --attach");
      step.vertices = {need_vertex()};
      step.attachment = config.attachment;
      break;
  }
  return apply_recorded(tree, std::move(step));
}

int run_transform(const RunConfig& config, std::ostream& out) {
  auto any = load_tree(config);
  std::string summary;
  std::string tree_json = std::visit(
      [&](const auto& tree) {
        check_caps(tree, config);
        auto result = transform_tree(tree, config);
        require_valid(result.tree);
        const bool equivalent = check_equivalence(tree, result.tree, config.tolerance);
        if (!equivalent) throw Error(ErrorCode::kPrecondition, "transformed tree changed the leaf law");
        if (!config.trace.empty()) write_file(config.trace, trace_to_json(result.trace) + "\n");
        summary = JsonObject()
                      .str("rule", config.replay.empty() ? config.rule : "replay")
                      .integer("steps", static_cast<long long>(result.trace.steps.size()))
                      .boolean("equivalent", equivalent)
                      .boolean("simple_caterpillar", simple_caterpillar_spine(result.tree).has_value())
                      .integer("vertices", static_cast<long long>(result.tree.vertex_count()))
                      .done();
        return tree_to_json(result.tree);
      },
      any);
  emit(config, out, tree_json);
  if (!config.output.empty()) out << summary << '\n';
  return 0;
}

int run_bound(const RunConfig& config, std::ostream& out) {
  if (config.alpha) {
    emit(config, out, json_number(star_bound(*config.alpha)));
    return 0;
  }
  if (config.input.empty()) throw Error(ErrorCode::kInvalidArgument, "bound needs --alpha or --in star.json");
  auto any = load_tree(config);
  std::string text = std::visit(
      [&](const auto& tree) {
        using T = typename std::decay_t<decltype(tree)>::value_type;
        check_caps(tree, config);
        auto spec = star_spec(tree);
        if (!spec) throw Error(ErrorCode::kPrecondition, "tree is not a star");
        const T variance = star_expected_center_variance(tree, config.max_leaves);
        const double bound = star_bound(Field<T>::to_double(spec->alpha));
        return JsonObject()
            .raw("alpha", value_json(spec->alpha))
            .raw("expected_center_variance", value_json(variance))
            .raw("sign_error_probability", value_json(star_sign_error_probability(*spec)))
            .num("bound", bound)
            .boolean("within_bound", Field<T>::to_double(variance) <= bound)
            .done();
      },
      any);
  emit(config, out, text);
  return 0;
}

int run_scan(const RunConfig& config, std::ostream& out) {
  ScanOptions options;
  options.family = parse_family(config.family);
  options.trials = config.trials;
  options.min_leaves = config.min_size;
  options.max_leaves = config.max_size;
  options.seed = *config.seed;
  options.threads = config.threads;
  if (static_cast<std::size_t>(config.max_size) > config.max_leaves)
    throw Error(ErrorCode::kCapExceeded, "--max-size exceeds the leaf cap");
  auto records = scan_conjectureB(options);
  const ReportFormat format = config.format.empty() ? format_for_path(config.output) : parse_report_format(config.format);
  std::size_t violations = 0;
  double max_scaled = 0.0;
  for (const auto& r : records) {
    violations += r.violation() ? 1 : 0;
    max_scaled = std::max(max_scaled, r.lhs_times_t);
  }
  emit(config, out, emit_report(records, format));
  if (!config.output.empty())
    out << JsonObject()
               .str("family", config.family)
               .integer("trials", static_cast<long long>(records.size()))
               .integer("violations", static_cast<long long>(violations))
               .num("max_lhs_times_t", max_scaled)
               .num("constant", theoremC_constant())
               .done()
        << '\n';
  return violations == 0 ? 0 : static_cast<int>(ErrorCode::kScanViolation);
}

int run_counterexample(const RunConfig& config, std::ostream& out) {
  const bool exact = config.mode != NumericMode::kFloat;
  auto go = [&]<class T>(std::type_identity<T>) {
    auto dist = parity_counterexample<T>(config.order, config.max_leaves);
    if (!config.series.empty()) {
      const int last = config.order;
      auto cov = avg_cov_cond_series(dist, 0, last);
      std::string csv = emit_report(std::span<const MetricSeries<T>>(&cov, 1), ReportFormat::kCsv);
      auto info = avg_info_cond_series(dist, 0, last);
      std::string info_csv = emit_report(std::span<const MetricSeries<double>>(&info, 1), ReportFormat::kCsv);
      csv += info_csv.substr(info_csv.find('\n') + 1);
      write_file(config.series, csv);
    }
    emit(config, out, distribution_to_json(dist));
  };
  if (exact) go(std::type_identity<Rational>{});
  else go(std::type_identity<double>{});
  return 0;
}

}  // namespace

void check_config(const RunConfig& config) {
  if (config.max_leaves == 0 || config.max_vertices == 0)
    throw Error(ErrorCode::kInvalidArgument, "caps must be positive");
  if (!(config.tolerance > 0.0)) throw Error(ErrorCode::kInvalidArgument, "tolerance must be positive");
  if ((config.command == "sample" || config.command == "scan") && !config.seed)
    throw Error(ErrorCode::kInvalidArgument, "command '" + config.command + "' needs --seed");
}

int run(const RunConfig& config, std::ostream& out) {
  check_config(config);
  const std::string& c = config.command;
  if (c == "validate") return run_validate(config, out);
  if (c == "sample") return run_sample(config, out);
  if (c == "dist") return run_dist(config, out);
  if (c == "cond-cov") return run_cond_cov(config, out);
  if (c == "metrics") return run_metrics(config, out);
  if (c == "transform") return run_transform(config, out);
  if (c == "bound") return run_bound(config, out);
  if (c == "scan") return run_scan(config, out);
  if (c == "counterexample") return run_counterexample(config, out);
  throw Error(ErrorCode::kInvalidArgument, "unknown command '" + c + "'");
}

ReportFormat parse_report_format(std::string_view name) {
  if (name == "csv") return ReportFormat::kCsv;
  if (name == "json") return ReportFormat::kJson;
  if (name == "jsonl") return ReportFormat::kJsonl;
  throw Error(ErrorCode::kInvalidArgument, "format must be csv, json or jsonl");
}

ReportFormat format_for_path(const std::filesystem::path& path) {
  const auto ext = path.extension().string();
  if (ext == ".csv") return ReportFormat::kCsv;
  if (ext == ".json") return ReportFormat::kJson;
  return ReportFormat::kJsonl;
}

std::string emit_report(std::span<const ScanRecord> records, ReportFormat format) {
  switch (format) {
    case ReportFormat::kCsv: return scan_records_to_csv(records);
    case ReportFormat::kJsonl: return scan_records_to_jsonl(records);
    case ReportFormat::kJson: {
      std::string out = "[";
      for (std::size_t i = 0; i < records.size(); ++i) out += (i ? "," : "") + scan_record_to_json(records[i]);
      return out + "]\n";
    }
  }
  return {};
}

template <NumericField T>
std::string emit_report(std::span<const MetricSeries<T>> series, ReportFormat format) {
  switch (format) {
    case ReportFormat::kCsv: return metric_series_to_csv(series);
    case ReportFormat::kJsonl: {
      std::string out;
      for (const auto& s : series) out += metric_series_to_json(s) + "\n";
      return out;
    }
    case ReportFormat::kJson: {
      std::string out = "[";
      for (std::size_t i = 0; i < series.size(); ++i) out += (i ? "," : "") + metric_series_to_json(series[i]);
      return out + "]\n";
    }
  }
  return {};
}

template std::string emit_report(std::span<const MetricSeries<Rational>>, ReportFormat);
template std::string emit_report(std::span<const MetricSeries<double>>, ReportFormat);

std::string error_report(const std::exception& error) {
  JsonObject report;
  if (const auto* e = dynamic_cast<const Error*>(&error)) {
    report.str("error", error_code_name(e->code())).integer("code", static_cast<int>(e->code()));
  } else {
    report.str("error", "internal").integer("code", 1);
  }
  return report.str("message", error.what()).done();
}

int exit_code(const std::exception& error) {
  if (const auto* e = dynamic_cast<const Error*>(&error)) return static_cast<int>(e->code());
  return 1;
}

std::pair<int, int> parse_t_range(std::string_view text) {
  const auto dots = text.find("..");
  if (dots == std::string_view::npos)
    throw Error(ErrorCode::kInvalidArgument, "t range must look like a..b");
  int a = static_cast<int>(parse_integer(text.substr(0, dots), "t range"));
  int b = static_cast<int>(parse_integer(text.substr(dots + 2), "t range"));
  if (a > b) throw Error(ErrorCode::kInvalidArgument, "t range is empty");
  return {a, b};
}

std::vector<VertexId> parse_id_list(std::string_view text) {
  std::vector<VertexId> out;
  std::size_t start = 0;
  while (start <= text.size()) {
    auto comma = text.find(',', start);
    auto part = text.substr(start, comma == std::string_view::npos ? std::string_view::npos : comma - start);
    out.push_back(parse_integer(part, "vertex id"));
    if (comma == std::string_view::npos) break;
    start = comma + 1;
  }
  return out;
}

std::map<VertexId, int> parse_attachment(std::string_view text) {
  std::map<VertexId, int> out;
  std::size_t start = 0;
  while (start <= text.size()) {
    auto comma = text.find(',', start);
    auto part = text.substr(start, comma == std::string_view::npos ? std::string_view::npos : comma - start);
    auto colon = part.find(':');
    if (colon == std::string_view::npos)
      throw Error(ErrorCode::kInvalidArgument, "attachment entries must look like vertex:position");
    out[parse_integer(part.substr(0, colon), "attachment vertex")] =
        static_cast<int>(parse_integer(part.substr(colon + 1), "attachment position"));
    if (comma == std::string_view::npos) break;
    start = comma + 1;
  }
  return out;
}

}  // namespace ift::cli
