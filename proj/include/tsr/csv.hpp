#pragma once

#include <filesystem>
#include <string>
#include <vector>

namespace tsr::csv {

// Locale-independent shortest round-trip representation.
std::string format_double(double v);
// Fixed-precision variant for rendered output.
std::string format_fixed(double v, int precision);

// Collects rows in memory and writes the whole file in one pass, so a failed
// run never leaves a partial CSV behind.
class Writer {
 public:
  explicit Writer(std::vector<std::string> header);
  void row(std::vector<std::string> cells);
  void save(const std::filesystem::path& path) const;
  const std::string& content();

 private:
  std::size_t columns_;
  std::string buffer_;
  bool sealed_ = false;
};

struct Table {
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;
};

Table read(const std::filesystem::path& path);

}  // namespace tsr::csv
