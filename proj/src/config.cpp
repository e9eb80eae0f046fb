#include "fgame/config.hpp"

#include <fstream>
#include <istream>
#include <sstream>
#include <stdexcept>

namespace fgame {

namespace {

std::string trim(const std::string& s) {
  auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return "";
  auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

std::string dirname_of(const std::string& path) {
  auto slash = path.find_last_of('/');
  return slash == std::string::npos ? std::string(".") : path.substr(0, slash);
}

[[noreturn]] void fail(const std::string& file, int line,
                       const std::string& msg) {
  throw std::runtime_error(file + ":" + std::to_string(line) + ": " + msg);
}

}  // namespace

Config Config::parse_file(const std::string& path) {
  Config c;
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open config file: " + path);
  c.parse_stream(in, path, dirname_of(path), 0);
  return c;
}

Config Config::parse_string(const std::string& text, const std::string& name) {
  Config c;
  std::istringstream in(text);
  c.parse_stream(in, name, ".", 0);
  return c;
}

void Config::parse_stream(std::istream& in, const std::string& name,
                          const std::string& dir, int depth) {
  if (depth > 8) throw std::runtime_error(name + ": include depth exceeded");
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    std::string body = trim(line);
    if (body.empty()) continue;
    if (body.rfind("include ", 0) == 0) {
      std::string inc = trim(body.substr(8));
      if (inc.empty()) fail(name, lineno, "include needs a path");
      std::string full = inc.front() == '/' ? inc : dir + "/" + inc;
      std::ifstream sub(full);
      if (!sub) fail(name, lineno, "cannot open include: " + full);
      parse_stream(sub, full, dirname_of(full), depth + 1);
      continue;
    }
    auto eq = body.find('=');
    if (eq == std::string::npos)
      fail(name, lineno, "expected 'key = value', got '" + body + "'");
    std::string key = trim(body.substr(0, eq));
    std::string value = trim(body.substr(eq + 1));
    if (key.empty()) fail(name, lineno, "empty key");
    values_[key] = Entry{value, name, lineno};
  }
}

void Config::set(const std::string& key, const std::string& value,
                 const std::string& file, int line) {
  values_[key] = Entry{value, file, line};
}

std::string Config::get_string(const std::string& key,
                               const std::string& dflt) const {
  auto it = values_.find(key);
  return it == values_.end() ? dflt : it->second.value;
}

double Config::get_double(const std::string& key, double dflt) const {
  auto it = values_.find(key);
  if (it == values_.end()) return dflt;
  try {
    std::size_t pos = 0;
    double v = std::stod(it->second.value, &pos);
    if (pos != it->second.value.size()) throw std::invalid_argument("trailing");
    return v;
  } catch (const std::exception&) {
    fail(it->second.file, it->second.line,
         key + ": expected a number, got '" + it->second.value + "'");
  }
}

int Config::get_int(const std::string& key, int dflt) const {
  auto it = values_.find(key);
  if (it == values_.end()) return dflt;
  try {
    std::size_t pos = 0;
    int v = std::stoi(it->second.value, &pos);
    if (pos != it->second.value.size()) throw std::invalid_argument("trailing");
    return v;
  } catch (const std::exception&) {
    fail(it->second.file, it->second.line,
         key + ": expected an integer, got '" + it->second.value + "'");
  }
}

std::uint64_t Config::get_u64(const std::string& key, std::uint64_t dflt) const {
  auto it = values_.find(key);
  if (it == values_.end()) return dflt;
  try {
    std::size_t pos = 0;
    std::uint64_t v = std::stoull(it->second.value, &pos);
    if (pos != it->second.value.size()) throw std::invalid_argument("trailing");
    return v;
  } catch (const std::exception&) {
    fail(it->second.file, it->second.line,
         key + ": expected an unsigned integer, got '" + it->second.value + "'");
  }
}

bool Config::get_bool(const std::string& key, bool dflt) const {
  auto it = values_.find(key);
  if (it == values_.end()) return dflt;
  const std::string& v = it->second.value;
  if (v == "true" || v == "1" || v == "yes" || v == "on") return true;
  if (v == "false" || v == "0" || v == "no" || v == "off") return false;
  fail(it->second.file, it->second.line,
       key + ": expected a boolean, got '" + v + "'");
}

namespace {
std::vector<std::string> split_list(const std::string& v) {
  std::vector<std::string> out;
  std::string cur;
  for (char ch : v) {
    if (ch == ',') {
      out.push_back(trim(cur));
      cur.clear();
    } else {
      cur += ch;
    }
  }
  out.push_back(trim(cur));
  return out;
}
}  // namespace

std::vector<double> Config::get_double_list(
    const std::string& key, const std::vector<double>& dflt) const {
  auto it = values_.find(key);
  if (it == values_.end()) return dflt;
  std::vector<double> out;
  for (const auto& tok : split_list(it->second.value)) {
    try {
      out.push_back(std::stod(tok));
    } catch (const std::exception&) {
      fail(it->second.file, it->second.line,
           key + ": expected a number list, got '" + it->second.value + "'");
    }
  }
  return out;
}

std::vector<int> Config::get_int_list(const std::string& key,
                                      const std::vector<int>& dflt) const {
  auto it = values_.find(key);
  if (it == values_.end()) return dflt;
  std::vector<int> out;
  for (const auto& tok : split_list(it->second.value)) {
    try {
      out.push_back(std::stoi(tok));
    } catch (const std::exception&) {
      fail(it->second.file, it->second.line,
           key + ": expected an integer list, got '" + it->second.value + "'");
    }
  }
  return out;
}

std::vector<std::string> Config::get_string_list(
    const std::string& key, const std::vector<std::string>& dflt) const {
  auto it = values_.find(key);
  if (it == values_.end()) return dflt;
  return split_list(it->second.value);
}

std::string Config::where(const std::string& key) const {
  auto it = values_.find(key);
  if (it == values_.end()) return "";
  return it->second.file + ":" + std::to_string(it->second.line) + ": " + key;
}

std::string Config::dump() const {
  std::ostringstream out;
  for (const auto& [k, e] : values_) out << k << " = " << e.value << "\n";
  return out.str();
}

std::uint64_t fnv1a(const std::string& text) {
  std::uint64_t h = 0xcbf29ce484222325ull;
  for (unsigned char ch : text) {
    h ^= ch;
    h *= 0x100000001b3ull;
  }
  return h;
}

}  // namespace fgame
