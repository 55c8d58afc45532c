#pragma once

// Persistence of suite results: <dir>/trace.csv with one row per recorded time
// and <dir>/summary.json with keys suite, params, thresholds, measurements,
// verdicts in that order. Output is a pure function of the report.

#include <cstdint>
#include <filesystem>
#include <string>
#include <string_view>
#include <utility>
#include <variant>
#include <vector>

#include "kdv/experiments.hpp"

namespace kdv {

using ParamValue = std::variant<double, std::int64_t, std::string>;

struct SuiteReport {
  std::string suite;
  std::vector<std::pair<std::string, ParamValue>> params;
  std::vector<std::pair<std::string, double>> thresholds;
  std::vector<std::pair<std::string, double>> measurements;
  std::vector<std::pair<std::string, bool>> verdicts;
  TrajectoryRecord trace;

  bool all_passed() const noexcept;
};

/// Header "t,l2,hs,hs_w,hs3_v,E2,E3,E4" and one row per sample, 17 significant digits.
std::string trace_csv(const TrajectoryRecord& rec);
/// Inverse of trace_csv for the numeric columns; meta is left default.
/// Throws std::invalid_argument on a malformed document.
TrajectoryRecord parse_trace_csv(std::string_view text);

std::string summary_json(const SuiteReport& report);

/// {"suite": ..., "error": kind, "message": ...}
std::string failure_json(std::string_view suite, std::string_view kind, std::string_view message);

/// Writes trace.csv and summary.json into dir, creating it if needed.
/// Throws std::runtime_error naming the path on I/O failure.
void persist(const SuiteReport& report, const std::filesystem::path& dir);

/// Writes text to path, creating parent directories.
void write_text(const std::filesystem::path& path, std::string_view text);

}  // namespace kdv
