#pragma once

#include <filesystem>
#include <string>
#include <vector>

namespace shaprob::csv {

/// Plain header + rows table; cells are unquoted and must not contain commas.
struct Table {
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;
};

/// Shortest representation that parses back to the same double.
std::string number(double v);

std::string to_string(const Table& t);
Table parse(const std::string& text);

void write(const Table& t, const std::filesystem::path& path);
Table read(const std::filesystem::path& path);

/// Column by header name as doubles; throws when absent or non-numeric.
std::vector<double> numeric_column(const Table& t, const std::string& name);

}  // namespace shaprob::csv
