#pragma once

// CSV output with a metadata header.
//
// Every file starts with "# key: value" lines (library version, config
// hash, grid and step choices) followed by one header row.  Floating-point
// values use the shortest representation that reads back to the same
// double, so identical inputs give byte-identical files.

#include <fstream>
#include <ostream>
#include <string>
#include <utility>
#include <variant>
#include <vector>

namespace qrev {

/// Library version written into every output header.
const char* version();

using Metadata = std::vector<std::pair<std::string, std::string>>;

/// Shortest round-trip decimal form of x ("inf", "-inf", "nan" for
/// non-finite values).
std::string format_double(double x);

using CsvCell = std::variant<double, long, std::string>;

class CsvWriter {
 public:
  /// Creates or truncates `path` ("-" writes to standard output); throws
  /// Error if it cannot be opened.
  CsvWriter(const std::string& path, const Metadata& metadata, const std::vector<std::string>& columns);

  void row(const std::vector<CsvCell>& cells);
  const std::string& path() const { return path_; }

 private:
  std::string path_;
  std::size_t n_columns_;
  std::ofstream file_;
  std::ostream* out_;
};

/// Joins `directory` and `name`, creating the directory if needed.
std::string output_path(const std::string& directory, const std::string& name);

}  // namespace qrev
