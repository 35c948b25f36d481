#pragma once

#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "kdbench/kd_metric.hpp"

namespace kdbench {

inline constexpr int kReportFormatVersion = 1;

inline const char* tool_version() { return KDBENCH_VERSION; }

// Record of the invocation that produced an artifact. Holds only inputs that
// determine the artifact's content (worker count is deliberately absent).
struct RunManifest {
  std::string subcommand;
  std::vector<std::string> inputs;
  nlohmann::ordered_json parameters = nlohmann::ordered_json::object();
  std::uint64_t seed = 0;
  std::vector<std::string> outputs;
  std::string version = tool_version();

  nlohmann::ordered_json to_json() const;
};

class ReportParseError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

nlohmann::ordered_json config_to_json(const GridSpec& grid, const ClassifyConfig& config);
nlohmann::ordered_json kd_report_to_json(const KDReport& report);

std::string serialize_kd_report(const KDReport& report, const std::optional<RunManifest>& manifest);
std::string serialize_comparison(const Comparison& comparison, const std::optional<RunManifest>& manifest);

/// Reads back a document written by serialize_kd_report. Throws ReportParseError.
KDReport parse_kd_report(std::string_view text);

/// The document re-dumped with every "wall_time" member removed.
std::string strip_wall_time(std::string_view text);

/// Fixed-width summary table; kd printed with four decimals.
std::string format_comparison_table(const Comparison& comparison, bool color);

/// `name KD n_valid/n_total`
std::string format_summary_line(const KDReport& report);

}  // namespace kdbench
