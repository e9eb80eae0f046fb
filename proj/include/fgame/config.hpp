#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

namespace fgame {

// Flat key-value experiment configs: "key = value" lines, '#' comments, and
// "include <path>" (relative to the including file). Every key remembers its
// source location for line-anchored diagnostics.
class Config {
 public:
  struct Entry {
    std::string value;
    std::string file;
    int line = 0;
  };

  static Config parse_file(const std::string& path);
  static Config parse_string(const std::string& text,
                             const std::string& name = "<inline>");

  bool has(const std::string& key) const { return values_.count(key) != 0; }
  void set(const std::string& key, const std::string& value,
           const std::string& file = "<override>", int line = 0);

  std::string get_string(const std::string& key, const std::string& dflt) const;
  double get_double(const std::string& key, double dflt) const;
  int get_int(const std::string& key, int dflt) const;
  std::uint64_t get_u64(const std::string& key, std::uint64_t dflt) const;
  bool get_bool(const std::string& key, bool dflt) const;
  std::vector<double> get_double_list(const std::string& key,
                                      const std::vector<double>& dflt) const;
  std::vector<int> get_int_list(const std::string& key,
                                const std::vector<int>& dflt) const;
  std::vector<std::string> get_string_list(
      const std::string& key, const std::vector<std::string>& dflt) const;

  // "file:line: key" for diagnostics; empty when the key is absent.
  std::string where(const std::string& key) const;
  const std::map<std::string, Entry>& entries() const { return values_; }

  // Sorted "key = value" lines; the reproducibility manifest content.
  std::string dump() const;

 private:
  void parse_stream(std::istream& in, const std::string& name,
                    const std::string& dir, int depth);

  std::map<std::string, Entry> values_;
};

// FNV-1a over a string; pins config+seed in run manifests.
std::uint64_t fnv1a(const std::string& text);

}  // namespace fgame
