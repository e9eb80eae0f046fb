#include "fgame/csv.hpp"

namespace fgame {

std::vector<std::vector<std::string>> read_csv(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open: " + path);
  std::vector<std::vector<std::string>> rows;
  std::string line;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    std::vector<std::string> fields;
    std::string cur;
    for (char ch : line) {
      if (ch == ',') {
        fields.push_back(cur);
        cur.clear();
      } else {
        cur += ch;
      }
    }
    fields.push_back(cur);
    rows.push_back(std::move(fields));
  }
  return rows;
}

}  // namespace fgame
