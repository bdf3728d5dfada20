#include "ift/io.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "json.hpp"

namespace ift {

namespace {

using Json = nlohmann::ordered_json;

[[noreturn]] void format_error(const std::string& message) { throw Error(ErrorCode::kFormat, message); }

Json parse_json(std::string_view text) {
  try {
    return Json::parse(text);
  } catch (const nlohmann::json::exception& e) {
    format_error(std::string("malformed JSON: ") + e.what());
  }
}

// Serializer with 17 significant digits for floating-point numbers.
void write_json(const Json& j, std::string& out) {
  switch (j.type()) {
    case Json::value_t::number_float: {
      if (!std::isfinite(j.get<double>())) {
        out += "null";
        return;
      }
      char buf[32];
      std::snprintf(buf, sizeof buf, "%.17g", j.get<double>());
      out += buf;
      return;
    }
    case Json::value_t::array: {
      out += '[';
      bool first = true;
      for (const auto& x : j) {
        if (!first) out += ',';
        first = false;
        write_json(x, out);
      }
      out += ']';
      return;
    }
    case Json::value_t::object: {
      out += '{';
      bool first = true;
      for (const auto& [key, value] : j.items()) {
        if (!first) out += ',';
        first = false;
        out += Json(key).dump();
        out += ':';
        write_json(value, out);
      }
      out += '}';
      return;
    }
    default:
      out += j.dump();
  }
}

std::string dump(const Json& j) {
  std::string out;
  write_json(j, out);
  return out;
}

template <NumericField T>
Json value_json(const T& x) {
  if constexpr (Field<T>::kExact) return Field<T>::to_string(x);
  else return x;
}

template <NumericField T>
T value_from_json(const Json& j, const char* what) {
  if constexpr (Field<T>::kExact) {
    if (j.is_string()) {
      try {
        return parse_rational(j.get<std::string>());
      } catch (const Error& e) {
        format_error(std::string(what) + ": " + e.what());
      }
    }
    if (j.is_number_integer()) return Field<T>::from_ratio(j.get<std::int64_t>(), 1);
    if (j.is_number()) return Field<T>::from_double(j.get<double>());
  } else {
    if (j.is_number()) return j.get<double>();
    if (j.is_string()) {
      try {
        return parse_rational(j.get<std::string>()).get_d();
      } catch (const Error& e) {
        format_error(std::string(what) + ": " + e.what());
      }
    }
  }
  format_error(std::string(what) + " must be a number or a \"p/q\" string");
}

VertexId id_from_json(const Json& j, const char* what) {
  if (!j.is_number_integer()) format_error(std::string(what) + " must be an integer id");
  return j.get<VertexId>();
}

std::vector<VertexId> ids_from_json(const Json& j, const char* what) {
  if (!j.is_array()) format_error(std::string(what) + " must be an array of ids");
  std::vector<VertexId> out;
  for (const auto& x : j) out.push_back(id_from_json(x, what));
  return out;
}

const Json& member(const Json& obj, const char* key) {
  if (!obj.is_object() || !obj.contains(key)) format_error(std::string("missing field \"") + key + "\"");
  return obj.at(key);
}

// Picks the numeric type from how values are written: all strings -> rational,
// all numbers -> float, mixed -> error.
bool choose_exact(const std::vector<const Json*>& values, NumericMode mode, const char* what) {
  if (mode == NumericMode::kRational) return true;
  if (mode == NumericMode::kFloat) return false;
  bool strings = false, numbers = false;
  for (const Json* v : values) {
    if (v->is_string()) strings = true;
    else if (v->is_number()) numbers = true;
    else format_error(std::string(what) + " must be numbers or \"p/q\" strings");
  }
  if (strings && numbers)
    format_error(std::string(what) + " mix \"p/q\" strings and numbers; pass an explicit numeric mode");
  return !numbers;
}

template <NumericField T>
Json edge_json(VertexId u, VertexId v, const T& rho) {
  return Json::array({u, v, value_json(rho)});
}

template <NumericField T>
InfoFlowTree<T> tree_from_json(const Json& j) {
  auto vertices = ids_from_json(member(j, "vertices"), "vertices");
  const Json& edges_json = member(j, "edges");
  if (!edges_json.is_array()) format_error("edges must be an array");
  std::vector<Edge<T>> edges;
  for (const auto& e : edges_json) {
    if (!e.is_array() || e.size() != 3) format_error("each edge must be [u, v, rho]");
    edges.push_back({id_from_json(e[0], "edge endpoint"), id_from_json(e[1], "edge endpoint"),
                     value_from_json<T>(e[2], "edge correlation")});
  }
  std::optional<std::vector<VertexId>> leaves;
  if (j.contains("leaves")) leaves = ids_from_json(j.at("leaves"), "leaves");
  return InfoFlowTree<T>(std::move(vertices), std::move(edges), std::move(leaves));
}

Json assignment_json(const Assignment& a) {
  Json out = Json::array();
  for (const auto& [label, spin] : a) out.push_back(Json::array({label, spin.value()}));
  return out;
}

template <NumericField T>
Json edges_json(const std::vector<EdgeCorrelation<T>>& edges) {
  Json out = Json::array();
  for (const auto& e : edges) out.push_back(edge_json(e.u, e.v, e.rho));
  return out;
}

template <NumericField T>
std::vector<EdgeCorrelation<T>> edges_from_json(const Json& j) {
  if (!j.is_array()) format_error("edge list must be an array");
  std::vector<EdgeCorrelation<T>> out;
  for (const auto& e : j) {
    if (!e.is_array() || e.size() != 3) format_error("each edge must be [u, v, rho]");
    out.push_back({id_from_json(e[0], "edge endpoint"), id_from_json(e[1], "edge endpoint"),
                   value_from_json<T>(e[2], "edge correlation")});
  }
  return out;
}

std::string format_double(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

template <NumericField T>
std::string csv_value(const T& x) {
  if constexpr (Field<T>::kExact) return Field<T>::to_string(x);
  else return format_double(x);
}

}  // namespace

NumericMode parse_numeric_mode(std::string_view name) {
  if (name == "auto") return NumericMode::kAuto;
  if (name == "rational") return NumericMode::kRational;
  if (name == "float") return NumericMode::kFloat;
  throw Error(ErrorCode::kInvalidArgument, "numeric mode must be auto, rational or float");
}

DocumentKind document_kind(std::string_view json_text) {
  Json j = parse_json(json_text);
  if (j.is_object() && j.contains("probs")) return DocumentKind::kDistribution;
  if (j.is_object() && j.contains("edges")) return DocumentKind::kTree;
  format_error("document is neither a tree (\"edges\") nor a distribution (\"probs\")");
}

AnyTree parse_tree_json(std::string_view json_text, NumericMode mode) {
  Json j = parse_json(json_text);
  const Json& edges = member(j, "edges");
  if (!edges.is_array()) format_error("edges must be an array");
  std::vector<const Json*> rhos;
  for (const auto& e : edges) {
    if (!e.is_array() || e.size() != 3) format_error("each edge must be [u, v, rho]");
    rhos.push_back(&e[2]);
  }
  if (choose_exact(rhos, mode, "edge correlations")) return tree_from_json<Rational>(j);
  return tree_from_json<double>(j);
}

template <NumericField T>
std::string tree_to_json(const InfoFlowTree<T>& tree) {
  Json j;
  j["vertices"] = tree.vertices();
  Json edges = Json::array();
  for (const auto& e : tree.edges()) edges.push_back(edge_json(e.u, e.v, e.rho));
  j["edges"] = std::move(edges);
  j["leaves"] = tree.leaves();
  return dump(j);
}

AnyDistribution parse_distribution_json(std::string_view json_text, NumericMode mode, std::size_t cap) {
  Json j = parse_json(json_text);
  auto labels = ids_from_json(member(j, "labels"), "labels");
  const Json& probs = member(j, "probs");
  if (!probs.is_array()) format_error("probs must be an array");
  std::vector<const Json*> values;
  for (const auto& p : probs) values.push_back(&p);
  auto build = [&]<class T>(std::type_identity<T>) -> AnyDistribution {
    std::vector<T> ps;
    for (const auto& p : probs) ps.push_back(value_from_json<T>(p, "probability"));
    return JointDistribution<T>(labels, std::move(ps), cap);
  };
  if (choose_exact(values, mode, "probabilities")) return build(std::type_identity<Rational>{});
  return build(std::type_identity<double>{});
}

template <NumericField T>
std::string distribution_to_json(const JointDistribution<T>& dist) {
  Json j;
  j["labels"] = dist.labels();
  Json probs = Json::array();
  for (std::size_t i = 0; i < dist.size(); ++i) probs.push_back(value_json(dist[i]));
  j["probs"] = std::move(probs);
  return dump(j);
}

std::string violations_to_json(const std::vector<Violation>& violations) {
  Json j;
  j["valid"] = violations.empty();
  Json list = Json::array();
  for (const auto& v : violations)
    list.push_back(Json{{"kind", std::string(violation_kind_name(v.kind))}, {"message", v.message}});
  j["violations"] = std::move(list);
  return dump(j);
}

std::string sample_to_json(const Sample& sample) {
  Json j;
  j["seed"] = sample.seed;
  j["vertices"] = assignment_json(sample.vertices);
  Json edges = Json::array();
  for (Spin s : sample.edges) edges.push_back(s.value());
  j["edges"] = std::move(edges);
  return dump(j);
}

template <NumericField T>
std::string cond_cov_report_to_json(const CondCovReport<T>& report) {
  Json j;
  j["u"] = report.u;
  j["v"] = report.v;
  j["conditioning"] = report.conditioning;
  Json outcomes = Json::array();
  for (const auto& o : report.outcomes)
    outcomes.push_back(Json{{"outcome", assignment_json(o.outcome)},
                            {"probability", value_json(o.probability)},
                            {"covariance", value_json(o.covariance)}});
  j["outcomes"] = std::move(outcomes);
  j["expectation"] = value_json(report.expectation);
  return dump(j);
}

template <NumericField T>
std::string trace_to_json(const TransformTrace<T>& trace) {
  Json steps = Json::array();
  for (const auto& s : trace.steps) {
    Json attachment = Json::array();
    for (const auto& [vertex, position] : s.attachment) attachment.push_back(Json::array({vertex, position}));
    steps.push_back(Json{{"rule", std::string(rule_name(s.rule))},
                         {"vertices", s.vertices},
                         {"attachment", std::move(attachment)},
                         {"before", edges_json(s.before)},
                         {"after", edges_json(s.after)}});
  }
  Json j;
  j["steps"] = std::move(steps);
  return dump(j);
}

template <NumericField T>
TransformTrace<T> parse_trace_json(std::string_view json_text) {
  Json j = parse_json(json_text);
  const Json& steps = member(j, "steps");
  if (!steps.is_array()) format_error("steps must be an array");
  TransformTrace<T> trace;
  for (const auto& s : steps) {
    TransformStep<T> step;
    const Json& rule = member(s, "rule");
    if (!rule.is_string()) format_error("rule must be a string");
    try {
      step.rule = parse_rule(rule.get<std::string>());
    } catch (const Error& e) {
      format_error(e.what());
    }
    step.vertices = ids_from_json(member(s, "vertices"), "step vertices");
    if (s.contains("attachment")) {
      for (const auto& a : s.at("attachment")) {
        if (!a.is_array() || a.size() != 2 || !a[1].is_number_integer())
          format_error("attachment entries must be [vertex, position]");
        step.attachment[id_from_json(a[0], "attachment vertex")] = a[1].get<int>();
      }
    }
    if (s.contains("before")) step.before = edges_from_json<T>(s.at("before"));
    if (s.contains("after")) step.after = edges_from_json<T>(s.at("after"));
    trace.steps.push_back(std::move(step));
  }
  return trace;
}

template <NumericField T>
std::string metric_series_to_csv(std::span<const MetricSeries<T>> series) {
  std::string out = "metric,t,value\n";
  for (const auto& s : series)
    for (const auto& p : s.values) out += s.metric + "," + std::to_string(p.t) + "," + csv_value(p.value) + "\n";
  return out;
}

template <NumericField T>
std::string metric_series_to_json(const MetricSeries<T>& series) {
  Json values = Json::array();
  for (const auto& p : series.values) values.push_back(Json{{"t", p.t}, {"value", value_json(p.value)}});
  Json j;
  j["metric"] = series.metric;
  j["n"] = series.n;
  j["values"] = std::move(values);
  return dump(j);
}

std::string json_string(std::string_view text) { return Json(std::string(text)).dump(); }

std::string json_number(double x) { return dump(Json(x)); }

std::string scan_record_to_json(const ScanRecord& r) {
  Json j;
  j["trial"] = r.trial;
  j["seed"] = r.seed;
  j["family"] = r.family;
  j["topology_hash"] = r.topology_hash;
  j["t"] = r.t;
  j["rhos"] = r.rhos;
  j["quantity"] = r.quantity;
  j["lhs"] = r.lhs;
  j["bound"] = r.bound;
  j["margin"] = r.margin;
  j["lhs_times_t"] = r.lhs_times_t;
  j["asserted"] = r.asserted;
  j["violation"] = r.violation();
  return dump(j);
}

ScanRecord parse_scan_record(std::string_view json_line) {
  Json j = parse_json(json_line);
  ScanRecord r;
  try {
    r.trial = member(j, "trial").get<std::uint64_t>();
    r.seed = member(j, "seed").get<std::uint64_t>();
    r.family = member(j, "family").get<std::string>();
    r.topology_hash = member(j, "topology_hash").get<std::string>();
    r.t = member(j, "t").get<int>();
    r.rhos = member(j, "rhos").get<std::vector<double>>();
    r.quantity = member(j, "quantity").get<std::string>();
    r.lhs = member(j, "lhs").get<double>();
    r.bound = member(j, "bound").get<double>();
    r.margin = member(j, "margin").get<double>();
    r.lhs_times_t = member(j, "lhs_times_t").get<double>();
    r.asserted = member(j, "asserted").get<bool>();
  } catch (const nlohmann::json::exception& e) {
    format_error(std::string("bad scan record: ") + e.what());
  }
  return r;
}

std::string scan_records_to_jsonl(std::span<const ScanRecord> records) {
  std::string out;
  for (const auto& r : records) out += scan_record_to_json(r) + "\n";
  return out;
}

std::vector<ScanRecord> parse_scan_records_jsonl(std::string_view text) {
  std::vector<ScanRecord> out;
  std::istringstream in{std::string(text)};
  for (std::string line; std::getline(in, line);)
    if (line.find_first_not_of(" \t\r") != std::string::npos) out.push_back(parse_scan_record(line));
  return out;
}

std::string scan_records_to_csv(std::span<const ScanRecord> records) {
  std::string out = "trial,seed,family,topology_hash,t,rhos,quantity,lhs,bound,margin,lhs_times_t,asserted,violation\n";
  for (const auto& r : records) {
    std::string rhos;
    for (std::size_t i = 0; i < r.rhos.size(); ++i) rhos += (i ? ";" : "") + format_double(r.rhos[i]);
    out += std::to_string(r.trial) + "," + std::to_string(r.seed) + "," + r.family + "," + r.topology_hash + "," +
           std::to_string(r.t) + "," + rhos + "," + r.quantity + "," + format_double(r.lhs) + "," +
           format_double(r.bound) + "," + format_double(r.margin) + "," + format_double(r.lhs_times_t) + "," +
           (r.asserted ? "true" : "false") + "," + (r.violation() ? "true" : "false") + "\n";
  }
  return out;
}

std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::kIo, "cannot open '" + path.string() + "' for reading");
  std::ostringstream buf;
  buf << in.rdbuf();
  if (in.bad()) throw Error(ErrorCode::kIo, "read failed for '" + path.string() + "'");
  return buf.str();
}

void write_file(const std::filesystem::path& path, std::string_view contents) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error(ErrorCode::kIo, "cannot open '" + path.string() + "' for writing");
  out.write(contents.data(), static_cast<std::streamsize>(contents.size()));
  if (!out) throw Error(ErrorCode::kIo, "write failed for '" + path.string() + "'");
}

#define IFT_INSTANTIATE(T)                                                                \
  template std::string tree_to_json(const InfoFlowTree<T>&);                              \
  template std::string distribution_to_json(const JointDistribution<T>&);                 \
  template std::string cond_cov_report_to_json(const CondCovReport<T>&);                  \
  template std::string trace_to_json(const TransformTrace<T>&);                           \
  template TransformTrace<T> parse_trace_json(std::string_view);                          \
  template std::string metric_series_to_csv(std::span<const MetricSeries<T>>);              \
  template std::string metric_series_to_json(const MetricSeries<T>&);
IFT_INSTANTIATE(Rational)
IFT_INSTANTIATE(double)
#undef IFT_INSTANTIATE

}  // namespace ift
