#include "vanet/csv.hpp"

#include <charconv>
#include <cmath>
#include <sstream>
#include <system_error>

#include "vanet/errors.hpp"

namespace vanet {

std::string format_double(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, res.ptr);
}

std::string format_optional(const std::optional<double>& v) {
  return v ? format_double(*v) : std::string{};
}

double parse_double(std::string_view s) {
  if (s == "nan") return std::nan("");
  if (s == "inf") return INFINITY;
  if (s == "-inf") return -INFINITY;
  double v = 0.0;
  const auto* end = s.data() + s.size();
  const auto res = std::from_chars(s.data(), end, v);
  if (res.ec != std::errc{} || res.ptr != end) {
    throw IoError("not a number: '" + std::string(s) + "'");
  }
  return v;
}

std::optional<double> parse_optional(std::string_view s) {
  if (s.empty()) return std::nullopt;
  return parse_double(s);
}

long long parse_int(std::string_view s) {
  long long v = 0;
  const auto* end = s.data() + s.size();
  const auto res = std::from_chars(s.data(), end, v);
  if (res.ec != std::errc{} || res.ptr != end) {
    throw IoError("not an integer: '" + std::string(s) + "'");
  }
  return v;
}

CsvWriter::CsvWriter(const std::filesystem::path& path, std::vector<std::string> header,
                     std::vector<std::string> comments)
    : file_(path, std::ios::binary), out_(&file_), header_(std::move(header)), path_(path) {
  if (!file_) throw IoError("cannot open '" + path.string() + "' for writing");
  start(comments);
}

CsvWriter::CsvWriter(std::ostream& os, std::vector<std::string> header,
                     std::vector<std::string> comments)
    : out_(&os), header_(std::move(header)) {
  start(comments);
}

void CsvWriter::start(const std::vector<std::string>& comments) {
  for (const auto& c : comments) *out_ << "# " << c << '\n';
  row(header_);
}

void CsvWriter::row(const std::vector<std::string>& fields) {
  if (fields.size() != header_.size()) {
    throw std::logic_error("CSV row width does not match header");
  }
  for (std::size_t i = 0; i < fields.size(); ++i) {
    if (i) *out_ << ',';
    *out_ << fields[i];
  }
  *out_ << '\n';
  if (!*out_) throw IoError("write failed for '" + path_.string() + "'");
}

std::size_t CsvTable::column(std::string_view name) const {
  for (std::size_t i = 0; i < header.size(); ++i) {
    if (header[i] == name) return i;
  }
  throw IoError("missing CSV column '" + std::string(name) + "'");
}

namespace {
std::vector<std::string> split(std::string_view line) {
  std::vector<std::string> out;
  std::size_t start = 0;
  while (true) {
    const auto pos = line.find(',', start);
    out.emplace_back(line.substr(start, pos - start));
    if (pos == std::string_view::npos) break;
    start = pos + 1;
  }
  return out;
}
}  // namespace

CsvTable parse_csv(std::string_view text) {
  CsvTable t;
  std::size_t start = 0;
  bool have_header = false;
  while (start < text.size()) {
    auto end = text.find('\n', start);
    if (end == std::string_view::npos) end = text.size();
    auto line = text.substr(start, end - start);
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    start = end + 1;
    if (line.empty()) continue;
    if (line.front() == '#') {
      line.remove_prefix(1);
      if (!line.empty() && line.front() == ' ') line.remove_prefix(1);
      t.comments.emplace_back(line);
      continue;
    }
    auto fields = split(line);
    if (!have_header) {
      t.header = std::move(fields);
      have_header = true;
    } else {
      if (fields.size() != t.header.size()) throw IoError("CSV row width does not match header");
      t.rows.push_back(std::move(fields));
    }
  }
  if (!have_header) throw IoError("CSV without header row");
  return t;
}

CsvTable read_csv(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open '" + path.string() + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_csv(ss.str());
}

}  // namespace vanet
