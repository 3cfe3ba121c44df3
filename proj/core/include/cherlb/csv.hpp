#pragma once

// Experiment output: CSV with a '#'-prefixed manifest header. Data rows
// are a pure function of (command, flags, seed): reruns under any worker
// count must produce byte-identical rows. Numbers are written in
// scientific notation with 12 significant digits so verification tooling
// can round-trip them losslessly.

#include <cstdint>
#include <ostream>
#include <string>
#include <utility>
#include <vector>

namespace cherlb::csv {

struct RunManifest {
  std::string command;
  std::vector<std::pair<std::string, std::string>> parameters;
  std::uint64_t seed = 0;
  std::string tool_version;
  std::string started;
  std::string finished;
};

std::string format_number(double v);
std::string now_utc();

class Writer {
 public:
  explicit Writer(std::ostream& os) : os_(os) {}

  void manifest(const RunManifest& m);
  void header(const std::vector<std::string>& columns);
  void row(const std::vector<std::string>& cells);
  void numeric_row(const std::vector<double>& cells);

 private:
  std::ostream& os_;
};

}  // namespace cherlb::csv
