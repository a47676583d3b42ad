#pragma once

#include <filesystem>
#include <fstream>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace sohkit::csv {

std::vector<std::string> split_line(const std::string& line, char delim = ',');

// Strict double parse of a whole field; rejects empty/trailing garbage.
std::optional<double> parse_double(std::string_view field);

// Deterministic number formatting for all emitted artifacts ("%.*g").
std::string fmt(double v, int precision = 12);

// Buffered CSV writer; caller supplies fully formatted fields.
class Writer {
 public:
  explicit Writer(const std::filesystem::path& path);
  void raw_line(std::string_view line);
  void row(const std::vector<std::string>& fields);
  void close();

 private:
  std::ofstream out_;
  std::string path_;
};

}  // namespace sohkit::csv
