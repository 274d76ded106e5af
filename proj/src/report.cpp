#include "torusrw/report.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>

#include "torusrw/errors.hpp"

#ifndef TORUSRW_VERSION
#define TORUSRW_VERSION "unknown"
#endif

namespace torusrw {

const char* const kCsvHeader =
    "experiment,label,N,estimate,stderr,target,target_error,tolerance,rule,pass";

std::string to_string(Rule r) {
  switch (r) {
    case Rule::within:
      return "within";
    case Rule::upper:
      return "upper";
    case Rule::below:
      return "below";
    case Rule::info:
      return "info";
  }
  return "info";
}

Rule rule_from_string(const std::string& s) {
  if (s == "within") return Rule::within;
  if (s == "upper") return Rule::upper;
  if (s == "below") return Rule::below;
  if (s == "info") return Rule::info;
  throw InvalidArgument("unknown rule '" + s + "'");
}

bool verdict(const ReportRow& r) {
  const double slack = 3.0 * r.std_error;
  switch (r.rule) {
    case Rule::within:
      return std::abs(r.estimate - r.target) <= r.tolerance + slack + r.target_error;
    case Rule::upper:
      return r.estimate <= r.target + r.tolerance + slack + r.target_error;
    case Rule::below:
      return r.estimate + slack < r.target - r.tolerance;
    case Rule::info:
      return true;
  }
  return false;
}

ReportRow make_row(std::string experiment, std::string label, std::int64_t side, double estimate, double std_error,
                   double target, double target_error, double tolerance, Rule rule) {
  ReportRow r{std::move(experiment), std::move(label), side, estimate, std_error, target, target_error, tolerance,
              rule, true};
  r.pass = verdict(r);
  return r;
}

bool ExperimentReport::all_pass() const {
  for (const auto& r : rows) {
    if (!r.pass) return false;
  }
  return true;
}

ReportFormat format_from_string(const std::string& s) {
  if (s == "csv") return ReportFormat::csv;
  if (s == "json") return ReportFormat::json;
  throw InvalidArgument("unknown report format '" + s + "' (expected csv or json)");
}

std::string version_string() { return TORUSRW_VERSION; }

namespace {

std::string num(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

// Labels are free text; quote them when they would break the column layout.
std::string field(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + "\"";
}

}  // namespace

void write_csv(std::ostream& os, const ExperimentReport& report) {
  os << kCsvHeader << '\n';
  for (const auto& r : report.rows) {
    os << field(r.experiment) << ',' << field(r.label) << ',' << r.side << ',' << num(r.estimate) << ','
       << num(r.std_error) << ',' << num(r.target) << ',' << num(r.target_error) << ',' << num(r.tolerance) << ','
       << to_string(r.rule) << ',' << (r.pass ? "true" : "false") << '\n';
  }
}

void to_json(nlohmann::json& j, const ReportRow& r) {
  j = nlohmann::json{{"experiment", r.experiment}, {"label", r.label},       {"N", r.side},
                     {"estimate", r.estimate},     {"stderr", r.std_error},  {"target", r.target},
                     {"target_error", r.target_error}, {"tolerance", r.tolerance}, {"rule", to_string(r.rule)},
                     {"pass", r.pass}};
}

void from_json(const nlohmann::json& j, ReportRow& r) {
  j.at("experiment").get_to(r.experiment);
  j.at("label").get_to(r.label);
  j.at("N").get_to(r.side);
  j.at("estimate").get_to(r.estimate);
  j.at("stderr").get_to(r.std_error);
  j.at("target").get_to(r.target);
  j.at("target_error").get_to(r.target_error);
  j.at("tolerance").get_to(r.tolerance);
  r.rule = rule_from_string(j.at("rule").get<std::string>());
  j.at("pass").get_to(r.pass);
}

void to_json(nlohmann::json& j, const ExperimentReport& r) {
  j = nlohmann::json{{"experiment", r.experiment},
                     {"metadata",
                      {{"seed", r.metadata.seed},
                       {"workers", r.metadata.workers},
                       {"wall_seconds", r.metadata.wall_seconds},
                       {"version", r.metadata.version}}},
                     {"rows", r.rows},
                     {"notes", r.notes},
                     {"all_pass", r.all_pass()}};
}

void from_json(const nlohmann::json& j, ExperimentReport& r) {
  j.at("experiment").get_to(r.experiment);
  const auto& m = j.at("metadata");
  m.at("seed").get_to(r.metadata.seed);
  m.at("workers").get_to(r.metadata.workers);
  m.at("wall_seconds").get_to(r.metadata.wall_seconds);
  m.at("version").get_to(r.metadata.version);
  j.at("rows").get_to(r.rows);
  j.at("notes").get_to(r.notes);
}

void emit_report(const ExperimentReport& report, const std::filesystem::path& path, ReportFormat format) {
  auto write = [&](std::ostream& os) {
    if (format == ReportFormat::csv) {
      write_csv(os, report);
    } else {
      os << nlohmann::json(report).dump(2) << '\n';
    }
  };
  if (path.empty() || path == "-") {
    write(std::cout);
    std::cout.flush();
    return;
  }
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot open " + path.string() + " for writing");
  write(out);
  out.flush();
  if (!out) throw IoError("write failed for " + path.string());
}

}  // namespace torusrw
