#include "sohkit/csvio.hpp"

#include <cstdio>
#include <cstdlib>

#include "sohkit/error.hpp"

namespace sohkit::csv {

std::vector<std::string> split_line(const std::string& line, char delim) {
  std::vector<std::string> out;
  std::size_t start = 0;
  while (true) {
    std::size_t pos = line.find(delim, start);
    if (pos == std::string::npos) {
      std::string last = line.substr(start);
      if (!last.empty() && last.back() == '\r') last.pop_back();
      out.push_back(std::move(last));
      break;
    }
    out.push_back(line.substr(start, pos - start));
    start = pos + 1;
  }
  return out;
}

std::optional<double> parse_double(std::string_view field) {
  while (!field.empty() && (field.front() == ' ' || field.front() == '\t'))
    field.remove_prefix(1);
  while (!field.empty() && (field.back() == ' ' || field.back() == '\t' ||
                            field.back() == '\r'))
    field.remove_suffix(1);
  if (field.empty()) return std::nullopt;
  char buf[64];
  if (field.size() >= sizeof(buf)) return std::nullopt;
  field.copy(buf, field.size());
  buf[field.size()] = '\0';
  char* end = nullptr;
  double v = std::strtod(buf, &end);
  if (end != buf + field.size()) return std::nullopt;
  return v;
}

std::string fmt(double v, int precision) {
  char buf[48];
  std::snprintf(buf, sizeof(buf), "%.*g", precision, v);
  return buf;
}

Writer::Writer(const std::filesystem::path& path)
    : out_(path), path_(path.string()) {
  if (!out_) raise(Errc::io_error, "cannot open for writing: " + path_);
}

void Writer::raw_line(std::string_view line) {
  out_ << line << '\n';
}

void Writer::row(const std::vector<std::string>& fields) {
  for (std::size_t i = 0; i < fields.size(); ++i) {
    if (i) out_ << ',';
    out_ << fields[i];
  }
  out_ << '\n';
}

void Writer::close() {
  out_.close();
  if (out_.fail()) raise(Errc::io_error, "write failed: " + path_);
}

}  // namespace sohkit::csv
