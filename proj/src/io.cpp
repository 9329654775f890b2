#include "qrev/io.hpp"

#include <charconv>
#include <cmath>
#include <filesystem>
#include <iostream>

#include "qrev/error.hpp"

namespace qrev {

const char* version() { return "1.0.0"; }

std::string format_double(double x) {
  if (std::isnan(x)) return "nan";
  if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
  char buffer[32];
  const auto result = std::to_chars(buffer, buffer + sizeof buffer, x);
  return std::string(buffer, result.ptr);
}

namespace {

std::string quote(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + "\"";
}

}  // namespace

CsvWriter::CsvWriter(const std::string& path, const Metadata& metadata, const std::vector<std::string>& columns)
    : path_(path), n_columns_(columns.size()), out_(&std::cout) {
  if (path != "-") {
    file_.open(path, std::ios::binary | std::ios::trunc);
    if (!file_) throw Error("cannot open " + path + " for writing");
    out_ = &file_;
  }
  std::ostream& out = *out_;
  out << "# qrev_version: " << version() << '\n';
  for (const auto& [key, value] : metadata) out << "# " << key << ": " << value << '\n';
  for (std::size_t i = 0; i < columns.size(); ++i) out << (i ? "," : "") << columns[i];
  out << '\n';
}

void CsvWriter::row(const std::vector<CsvCell>& cells) {
  if (cells.size() != n_columns_) throw Error("CSV row width does not match the header of " + path_);
  std::ostream& out = *out_;
  for (std::size_t i = 0; i < cells.size(); ++i) {
    if (i) out << ',';
    std::visit(
        [&out](const auto& v) {
          using T = std::decay_t<decltype(v)>;
          if constexpr (std::is_same_v<T, double>)
            out << format_double(v);
          else if constexpr (std::is_same_v<T, long>)
            out << v;
          else
            out << quote(v);
        },
        cells[i]);
  }
  out << '\n';
  if (!out) throw Error("write failed for " + path_);
}

std::string output_path(const std::string& directory, const std::string& name) {
  std::filesystem::path dir(directory.empty() ? "." : directory);
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec) throw Error("cannot create output directory " + dir.string() + ": " + ec.message());
  return (dir / name).string();
}

}  // namespace qrev
