#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <string>
#include <vector>

#include <json.hpp>

namespace torusrw {

/// How a row's estimate is judged against its target.
///   within: |estimate - target| <= tolerance + 3 stderr + target_error
///   upper:  estimate <= target + tolerance + 3 stderr + target_error
///   below:  estimate + 3 stderr < target - tolerance (a significant decrease)
///   info:   reported only, always passes
enum class Rule { within, upper, below, info };

std::string to_string(Rule r);
Rule rule_from_string(const std::string& s);

struct ReportRow {
  std::string experiment;
  std::string label;
  std::int64_t side = 0;  ///< N, 0 when the row is not tied to one N
  double estimate = 0.0;
  double std_error = 0.0;
  double target = 0.0;
  double target_error = 0.0;
  double tolerance = 0.0;
  Rule rule = Rule::info;
  bool pass = true;

  friend bool operator==(const ReportRow&, const ReportRow&) = default;
};

/// Pure function of the row's numbers and rule.
bool verdict(const ReportRow& row);

/// Fills in row.pass from verdict().
ReportRow make_row(std::string experiment, std::string label, std::int64_t side, double estimate, double std_error,
                   double target, double target_error, double tolerance, Rule rule);

struct ReportMetadata {
  std::uint64_t seed = 0;
  unsigned workers = 1;
  double wall_seconds = 0.0;
  std::string version;

  friend bool operator==(const ReportMetadata&, const ReportMetadata&) = default;
};

struct ExperimentReport {
  std::string experiment;
  ReportMetadata metadata;
  std::vector<ReportRow> rows;
  std::vector<std::string> notes;

  bool all_pass() const;
  friend bool operator==(const ExperimentReport&, const ExperimentReport&) = default;
};

enum class ReportFormat { csv, json };
ReportFormat format_from_string(const std::string& s);

std::string version_string();

/// Header plus one line per row; doubles printed with 17 significant digits.
void write_csv(std::ostream& os, const ExperimentReport& report);
extern const char* const kCsvHeader;

void to_json(nlohmann::json& j, const ReportRow& r);
void from_json(const nlohmann::json& j, ReportRow& r);
void to_json(nlohmann::json& j, const ExperimentReport& r);
void from_json(const nlohmann::json& j, ExperimentReport& r);

/// Writes to `path`, or to stdout when path is "-" or empty. Throws IoError.
void emit_report(const ExperimentReport& report, const std::filesystem::path& path, ReportFormat format);

}  // namespace torusrw
