#pragma once

#include <cstdio>
#include <fstream>
#include <stdexcept>
#include <string>
#include <vector>

namespace fgame {

// Fixed "%.12g" float formatting so replays are byte-identical.
inline std::string csv_num(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.12g", v);
  return buf;
}

class CsvWriter {
 public:
  CsvWriter(const std::string& path, const std::vector<std::string>& header)
      : out_(path, std::ios::binary), columns_(header.size()) {
    if (!out_) throw std::runtime_error("cannot open for writing: " + path);
    write_row(header);
  }

  void write_row(const std::vector<std::string>& fields) {
    if (fields.size() != columns_)
      throw std::logic_error("CsvWriter: column count mismatch");
    for (std::size_t i = 0; i < fields.size(); ++i) {
      if (i) out_ << ',';
      out_ << fields[i];
    }
    out_ << '\n';
  }

 private:
  std::ofstream out_;
  std::size_t columns_;
};

// Minimal reader for the schema round-trip checks.
std::vector<std::vector<std::string>> read_csv(const std::string& path);

}  // namespace fgame
