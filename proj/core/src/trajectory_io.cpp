#include "kdv/trajectory_io.hpp"

#include <array>
#include <cerrno>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <stdexcept>

#include <json.hpp>

namespace kdv {

namespace {

using Json = nlohmann::ordered_json;

constexpr std::string_view kHeader = "t,l2,hs,hs_w,hs3_v,E2,E3,E4";

void append_number(std::string& out, double x) {
  std::array<char, 32> buf{};
  const int n = std::snprintf(buf.data(), buf.size(), "%.17g", x);
  out.append(buf.data(), static_cast<std::size_t>(n));
}

double parse_number(std::string_view cell, std::size_t line) {
  const std::string s(cell);
  char* end = nullptr;
  errno = 0;
  const double x = std::strtod(s.c_str(), &end);
  if (s.empty() || end != s.c_str() + s.size() || errno == ERANGE)
    throw std::invalid_argument("trace csv: bad number '" + s + "' on line " + std::to_string(line));
  return x;
}

}  // namespace

bool SuiteReport::all_passed() const noexcept {
  for (const auto& [name, ok] : verdicts)
    if (!ok) return false;
  return true;
}

std::string trace_csv(const TrajectoryRecord& rec) {
  rec.validate();
  std::string out(kHeader);
  out += '\n';
  for (std::size_t i = 0; i < rec.size(); ++i) {
    const std::array<double, 8> row{rec.times[i], rec.l2[i],  rec.hs[i], rec.hs_w[i],
                                    rec.hs3_v[i], rec.E2[i], rec.E3[i], rec.E4[i]};
    for (std::size_t c = 0; c < row.size(); ++c) {
      if (c) out += ',';
      append_number(out, row[c]);
    }
    out += '\n';
  }
  return out;
}

TrajectoryRecord parse_trace_csv(std::string_view text) {
  TrajectoryRecord rec;
  std::size_t line_no = 0;
  while (!text.empty()) {
    const auto eol = text.find('\n');
    const std::string_view line = text.substr(0, eol);
    text = eol == std::string_view::npos ? std::string_view{} : text.substr(eol + 1);
    ++line_no;
    if (line_no == 1) {
      if (line != kHeader) throw std::invalid_argument("trace csv: unexpected header");
      continue;
    }
    if (line.empty()) continue;
    std::array<double, 8> row{};
    std::size_t col = 0, start = 0;
    while (true) {
      const auto comma = line.find(',', start);
      if (col == row.size()) throw std::invalid_argument("trace csv: too many columns");
      row[col++] = parse_number(line.substr(start, comma - start), line_no);
      if (comma == std::string_view::npos) break;
      start = comma + 1;
    }
    if (col != row.size()) throw std::invalid_argument("trace csv: too few columns");
    std::vector<double>* cols[] = {&rec.times, &rec.l2, &rec.hs, &rec.hs_w,
                                   &rec.hs3_v, &rec.E2, &rec.E3, &rec.E4};
    for (std::size_t c = 0; c < row.size(); ++c) cols[c]->push_back(row[c]);
  }
  if (line_no == 0) throw std::invalid_argument("trace csv: missing header");
  rec.validate();
  return rec;
}

std::string summary_json(const SuiteReport& report) {
  Json j;
  j["suite"] = report.suite;
  Json params = Json::object();
  for (const auto& [key, value] : report.params)
    std::visit([&](const auto& v) { params[key] = v; }, value);
  j["params"] = params;
  Json thresholds = Json::object();
  for (const auto& [key, value] : report.thresholds) thresholds[key] = value;
  j["thresholds"] = thresholds;
  Json measurements = Json::object();
  for (const auto& [key, value] : report.measurements) measurements[key] = value;
  j["measurements"] = measurements;
  Json verdicts = Json::object();
  for (const auto& [key, value] : report.verdicts) verdicts[key] = value;
  j["verdicts"] = verdicts;
  return j.dump(2) + "\n";
}

std::string failure_json(std::string_view suite, std::string_view kind, std::string_view message) {
  Json j;
  j["suite"] = suite;
  j["error"] = kind;
  j["message"] = message;
  return j.dump(2) + "\n";
}

void write_text(const std::filesystem::path& path, std::string_view text) {
  std::error_code ec;
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path(), ec);
  if (ec) throw std::runtime_error("cannot create directory " + path.parent_path().string() + ": " + ec.message());
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw std::runtime_error("cannot open " + path.string() + " for writing");
  out.write(text.data(), static_cast<std::streamsize>(text.size()));
  if (!out) throw std::runtime_error("write failed for " + path.string());
}

void persist(const SuiteReport& report, const std::filesystem::path& dir) {
  write_text(dir / "trace.csv", trace_csv(report.trace));
  write_text(dir / "summary.json", summary_json(report));
}

}  // namespace kdv
