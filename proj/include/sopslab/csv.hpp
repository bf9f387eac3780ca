#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace sopslab::csv {

struct Table {
  std::vector<std::string> header;  // empty when the file has none
  std::vector<std::vector<double>> rows;
};

/// Every row must have the same width. Blank lines are skipped.
Table read(const std::string& path, bool has_header);

/// Shortest text that round-trips the double exactly.
std::string format(double v);

void write_row(std::ostream& out, const std::vector<double>& values);
void write_header(std::ostream& out, const std::vector<std::string>& names);

}  // namespace sopslab::csv
