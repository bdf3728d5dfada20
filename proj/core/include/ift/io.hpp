#pragma once

// JSON / JSONL / CSV formats for trees, distributions, reports and traces.
//
// Tree:          {"vertices":[ids], "edges":[[u, v, rho]], "leaves":[ids]}
//                rho is a "p/q" string (rational mode) or a JSON number
//                (float mode); mixing both in one file is an error.
// Distribution:  {"labels":[ids], "probs":[...]} in bit-index order.

#include <filesystem>
#include <span>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "ift/bounds.hpp"
#include "ift/covariance.hpp"
#include "ift/distribution.hpp"
#include "ift/inference.hpp"
#include "ift/metrics.hpp"
#include "ift/transforms.hpp"
#include "ift/tree.hpp"

namespace ift {

enum class NumericMode { kAuto, kRational, kFloat };

NumericMode parse_numeric_mode(std::string_view name);

using AnyTree = std::variant<InfoFlowTree<Rational>, InfoFlowTree<double>>;
using AnyDistribution = std::variant<JointDistribution<Rational>, JointDistribution<double>>;

enum class DocumentKind { kTree, kDistribution };

/// Distinguishes a tree document ("edges") from a distribution ("probs").
DocumentKind document_kind(std::string_view json_text);

/// kAuto picks rational when every correlation is a string, float when every
/// one is a number; kRational converts numbers exactly, kFloat rounds
/// strings. Structural problems are left to validate().
AnyTree parse_tree_json(std::string_view json_text, NumericMode mode = NumericMode::kAuto);

template <NumericField T>
std::string tree_to_json(const InfoFlowTree<T>& tree);

AnyDistribution parse_distribution_json(std::string_view json_text,
                                        NumericMode mode = NumericMode::kAuto,
                                        std::size_t cap = kDefaultVariableCap);

template <NumericField T>
std::string distribution_to_json(const JointDistribution<T>& dist);

std::string violations_to_json(const std::vector<Violation>& violations);

std::string sample_to_json(const Sample& sample);

template <NumericField T>
std::string cond_cov_report_to_json(const CondCovReport<T>& report);

template <NumericField T>
std::string trace_to_json(const TransformTrace<T>& trace);

template <NumericField T>
TransformTrace<T> parse_trace_json(std::string_view json_text);

/// Header "metric,t,value", one row per point in t order.
template <NumericField T>
std::string metric_series_to_csv(std::span<const MetricSeries<T>> series);

/// {"metric": name, "n": n, "values": [{"t": t, "value": x}, ...]}.
template <NumericField T>
std::string metric_series_to_json(const MetricSeries<T>& series);

/// Quoted, escaped JSON string literal.
std::string json_string(std::string_view text);
/// JSON number with 17 significant digits.
std::string json_number(double x);

std::string scan_record_to_json(const ScanRecord& record);
ScanRecord parse_scan_record(std::string_view json_line);
std::string scan_records_to_jsonl(std::span<const ScanRecord> records);
std::vector<ScanRecord> parse_scan_records_jsonl(std::string_view text);
/// One CSV row per record under a fixed header.
std::string scan_records_to_csv(std::span<const ScanRecord> records);

/// Whole-file helpers; failures throw kIo.
std::string read_file(const std::filesystem::path& path);
void write_file(const std::filesystem::path& path, std::string_view contents);

}  // namespace ift
