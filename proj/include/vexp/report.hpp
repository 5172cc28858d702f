#pragma once

#include <string>
#include <vector>

#include "vexp/config.hpp"

namespace vexp {

enum class Format { Json, Csv, Svg };
Format parse_format(const std::string& name);
std::string extension(Format f);

struct Verdict {
  std::string name;
  bool passed = false;
  std::string detail;  // witness on failure
};

// Numeric table plus summary. A non-finite cell is DIVERGENT; NaN marks a
// skipped item.
struct Report {
  std::string command;
  Json config;
  std::vector<std::string> columns;
  std::vector<std::vector<double>> rows;
  std::vector<std::string> notes;  // per row, may be empty
  Json summary = Json::object();
  std::vector<Verdict> verdicts;
  double wall_seconds = 0.0;
  // Columns plotted by the svg emitter; empty x means row index.
  std::string plot_x;
  std::string plot_y;

  void add_row(std::vector<double> row, std::string note = {});
  std::size_t column(const std::string& name) const;  // throws InvalidInput
  bool passed() const;
};

Json to_json(const Report& r);
Report report_from_json(const Json& j);

std::string to_csv(const Report& r);
std::string to_svg(const Report& r);

// Writes <dir>/<command>.<ext>; returns the path.
std::string emit(const Report& r, const std::string& dir, Format f);

// Encodes a possibly infinite summary number: null when non-finite.
Json summary_number(double v);

}  // namespace vexp
