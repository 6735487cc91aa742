#pragma once

#include <filesystem>
#include <fstream>
#include <initializer_list>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace vanet {

/// Shortest decimal representation that parses back to the same double.
std::string format_double(double v);
/// Empty field for an absent value.
std::string format_optional(const std::optional<double>& v);

/// Throws IoError on malformed input.
double parse_double(std::string_view s);
std::optional<double> parse_optional(std::string_view s);
long long parse_int(std::string_view s);

/// Comma-separated writer with LF line endings. Comment lines start with
/// '#' and precede the header row.
class CsvWriter {
 public:
  CsvWriter(const std::filesystem::path& path, std::vector<std::string> header,
            std::vector<std::string> comments = {});
  CsvWriter(std::ostream& os, std::vector<std::string> header,
            std::vector<std::string> comments = {});

  void row(const std::vector<std::string>& fields);
  std::size_t columns() const { return header_.size(); }

 private:
  void start(const std::vector<std::string>& comments);

  std::ofstream file_;
  std::ostream* out_;
  std::vector<std::string> header_;
  std::filesystem::path path_;
};

struct CsvTable {
  std::vector<std::string> comments;
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;

  /// Index of a named column. Throws IoError if missing.
  std::size_t column(std::string_view name) const;
};

CsvTable read_csv(const std::filesystem::path& path);
CsvTable parse_csv(std::string_view text);

}  // namespace vanet
