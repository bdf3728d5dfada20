#pragma once

// Command dispatcher behind the `ift` executable. Kept as a library so that
// tests can drive commands without spawning processes.

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "ift/bounds.hpp"
#include "ift/io.hpp"
#include "ift/metrics.hpp"

namespace ift::cli {

struct RunConfig {
  std::string command;
  std::filesystem::path input;
  std::filesystem::path output;  // empty: standard output
  NumericMode mode = NumericMode::kAuto;
  std::size_t max_leaves = kDefaultVariableCap;
  std::size_t max_vertices = kDefaultVertexCap;
  std::optional<std::uint64_t> seed;
  double tolerance = kFloatTolerance;

  // validate / sample / dist
  std::uint64_t count = 1;
  std::string scope = "leaves";  // leaves | vertices

  // cond-cov
  std::optional<VertexId> u;
  std::optional<VertexId> v;
  std::string condition_on = "all-other-leaves";  // all-other-leaves | none | comma list
  std::filesystem::path report;

  // metrics
  std::string metric = "avgcovcond";  // avgcovcond | avginfocond | avgcov
  std::string t_range;                // "a..b"; empty: 0..n-2

  // transform
  std::string rule;
  std::filesystem::path trace;
  std::filesystem::path replay;
  std::optional<VertexId> vertex;
  std::vector<VertexId> vertices;
  std::map<VertexId, int> attachment;
  std::string rho1;
  std::string rho2;

  // bound
  std::optional<double> alpha;

  // scan
  std::string family = "simple-caterpillar";
  std::uint64_t trials = 100;
  int min_size = 2;
  int max_size = 8;
  unsigned threads = 0;
  std::string format;  // csv | json | jsonl; empty: from the output extension

  // counterexample
  int order = 1;
  std::filesystem::path series;
};

/// Throws kInvalidArgument when caps are not positive, the tolerance is not
/// positive, or a stochastic command lacks a seed.
void check_config(const RunConfig& config);

/// Runs one command. Returns the process exit status; writes results to the
/// configured paths or to `out`. Errors propagate as ift::Error.
int run(const RunConfig& config, std::ostream& out);

enum class ReportFormat { kCsv, kJson, kJsonl };

ReportFormat parse_report_format(std::string_view name);
/// Format implied by a file extension (.csv, .json, .jsonl); jsonl otherwise.
ReportFormat format_for_path(const std::filesystem::path& path);

std::string emit_report(std::span<const ScanRecord> records, ReportFormat format);
template <NumericField T>
std::string emit_report(std::span<const MetricSeries<T>> series, ReportFormat format);

/// {"error": name, "code": n, "message": text}.
std::string error_report(const std::exception& error);
/// ErrorCode value for ift::Error, 1 for anything else.
int exit_code(const std::exception& error);

/// "a..b" -> (a, b).
std::pair<int, int> parse_t_range(std::string_view text);
/// "3,4,5" -> {3, 4, 5}.
std::vector<VertexId> parse_id_list(std::string_view text);
/// "7:1,8:2" -> {7: 1, 8: 2}.
std::map<VertexId, int> parse_attachment(std::string_view text);

}  // namespace ift::cli
