#include "cherlb/csv.hpp"

#include <chrono>
#include <cstdio>
#include <ctime>

namespace cherlb::csv {

std::string format_number(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.11e", v);
  return buf;
}

std::string now_utc() {
  const auto now = std::chrono::system_clock::now();
  const std::time_t t = std::chrono::system_clock::to_time_t(now);
  std::tm tm{};
  gmtime_r(&t, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

void Writer::manifest(const RunManifest& m) {
  os_ << "# command = " << m.command << "\n";
  for (const auto& [k, v] : m.parameters) os_ << "# " << k << " = " << v << "\n";
  os_ << "# seed = " << m.seed << "\n";
  os_ << "# tool_version = " << m.tool_version << "\n";
  if (!m.started.empty()) os_ << "# started = " << m.started << "\n";
  if (!m.finished.empty()) os_ << "# finished = " << m.finished << "\n";
}

void Writer::header(const std::vector<std::string>& columns) {
  for (std::size_t i = 0; i < columns.size(); ++i)
    os_ << columns[i] << (i + 1 < columns.size() ? "," : "\n");
}

void Writer::row(const std::vector<std::string>& cells) {
  for (std::size_t i = 0; i < cells.size(); ++i)
    os_ << cells[i] << (i + 1 < cells.size() ? "," : "\n");
}

void Writer::numeric_row(const std::vector<double>& cells) {
  for (std::size_t i = 0; i < cells.size(); ++i)
    os_ << format_number(cells[i]) << (i + 1 < cells.size() ? "," : "\n");
}

}  // namespace cherlb::csv
