#pragma once

#include <algorithm>
#include <cctype>
#include <cstdint>
#include <fstream>
#include <map>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include "iotauth/errors.hpp"

namespace iotauth {

// INI-style configuration: [section] headers, key = value lines, '#' or ';'
// comments. Keys are addressed as "section.key". Values keep no quotes;
// everything after the first '#' on a line is ignored.
class ConfigFile {
 public:
  static ConfigFile parse_string(std::string_view text,
                                 const std::string& origin = "<string>") {
    ConfigFile cf;
    cf.origin_ = origin;
    cf.raw_.assign(text);
    std::string section;
    int line_no = 0;
    std::istringstream in{cf.raw_};
    std::string line;
    while (std::getline(in, line)) {
      ++line_no;
      if (auto pos = line.find('#'); pos != std::string::npos) line.erase(pos);
      if (auto pos = line.find(';'); pos != std::string::npos) line.erase(pos);
      const std::string trimmed = trim(line);
      if (trimmed.empty()) continue;
      if (trimmed.front() == '[') {
        if (trimmed.back() != ']')
          throw ConfigError("", origin + ": malformed section header", line_no);
        section = trim(trimmed.substr(1, trimmed.size() - 2));
        if (section.empty())
          throw ConfigError("", origin + ": empty section name", line_no);
        continue;
      }
      const auto eq = trimmed.find('=');
      if (eq == std::string::npos)
        throw ConfigError("", origin + ": expected key = value", line_no);
      const std::string key = trim(trimmed.substr(0, eq));
      const std::string value = trim(trimmed.substr(eq + 1));
      if (key.empty())
        throw ConfigError("", origin + ": empty key", line_no);
      if (section.empty())
        throw ConfigError(key, "key appears before any [section]", line_no);
      const std::string path = section + "." + key;
      if (cf.entries_.count(path))
        throw ConfigError(path, "duplicate key", line_no);
      cf.entries_[path] = Entry{value, line_no};
    }
    return cf;
  }

  static ConfigFile parse_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ConfigError("", "cannot open config file: " + path, 0);
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse_string(buf.str(), path);
  }

  bool has(const std::string& key) const { return entries_.count(key) > 0; }

  int line_of(const std::string& key) const {
    const auto it = entries_.find(key);
    return it == entries_.end() ? 0 : it->second.line;
  }

  std::string get_string(const std::string& key) const {
    const auto it = entries_.find(key);
    if (it == entries_.end())
      throw ConfigError(key, "missing required field", 0);
    return it->second.value;
  }
  std::string get_string(const std::string& key, const std::string& dflt) const {
    return has(key) ? get_string(key) : dflt;
  }

  double get_double(const std::string& key) const {
    return parse_double(key, get_string(key));
  }
  double get_double(const std::string& key, double dflt) const {
    return has(key) ? get_double(key) : dflt;
  }

  std::int64_t get_int(const std::string& key) const {
    return parse_int(key, get_string(key));
  }
  std::int64_t get_int(const std::string& key, std::int64_t dflt) const {
    return has(key) ? get_int(key) : dflt;
  }

  std::uint64_t get_uint(const std::string& key) const {
    const std::int64_t v = get_int(key);
    if (v < 0) throw ConfigError(key, "expected a non-negative integer", line_of(key));
    return static_cast<std::uint64_t>(v);
  }
  std::uint64_t get_uint(const std::string& key, std::uint64_t dflt) const {
    return has(key) ? get_uint(key) : dflt;
  }

  bool get_bool(const std::string& key) const {
    std::string v = get_string(key);
    std::transform(v.begin(), v.end(), v.begin(),
                   [](unsigned char c) { return std::tolower(c); });
    if (v == "true" || v == "1" || v == "yes" || v == "on") return true;
    if (v == "false" || v == "0" || v == "no" || v == "off") return false;
    throw ConfigError(key, "expected a boolean", line_of(key));
  }
  bool get_bool(const std::string& key, bool dflt) const {
    return has(key) ? get_bool(key) : dflt;
  }

  std::vector<double> get_double_list(const std::string& key) const {
    std::vector<double> out;
    for (const auto& tok : split_list(get_string(key)))
      out.push_back(parse_double(key, tok));
    return out;
  }
  std::vector<double> get_double_list(const std::string& key,
                                      std::vector<double> dflt) const {
    return has(key) ? get_double_list(key) : std::move(dflt);
  }

  std::vector<std::uint64_t> get_uint_list(const std::string& key) const {
    std::vector<std::uint64_t> out;
    for (const auto& tok : split_list(get_string(key))) {
      const std::int64_t v = parse_int(key, tok);
      if (v < 0) throw ConfigError(key, "expected non-negative integers", line_of(key));
      out.push_back(static_cast<std::uint64_t>(v));
    }
    return out;
  }
  std::vector<std::uint64_t> get_uint_list(const std::string& key,
                                           std::vector<std::uint64_t> dflt) const {
    return has(key) ? get_uint_list(key) : std::move(dflt);
  }

  std::vector<std::string> keys() const {
    std::vector<std::string> out;
    out.reserve(entries_.size());
    for (const auto& [k, v] : entries_) out.push_back(k);
    return out;
  }

  const std::string& raw_text() const { return raw_; }
  const std::string& origin() const { return origin_; }

 private:
  struct Entry {
    std::string value;
    int line = 0;
  };

  static std::string trim(std::string_view s) {
    const auto b = s.find_first_not_of(" \t\r\n");
    if (b == std::string_view::npos) return {};
    const auto e = s.find_last_not_of(" \t\r\n");
    return std::string(s.substr(b, e - b + 1));
  }

  static std::vector<std::string> split_list(const std::string& s) {
    std::vector<std::string> out;
    std::string tok;
    std::istringstream in(s);
    while (std::getline(in, tok, ',')) {
      tok = trim(tok);
      if (!tok.empty()) out.push_back(tok);
    }
    return out;
  }

  double parse_double(const std::string& key, const std::string& v) const {
    try {
      std::size_t used = 0;
      const double d = std::stod(v, &used);
      if (used != v.size()) throw std::invalid_argument(v);
      return d;
    } catch (const std::exception&) {
      throw ConfigError(key, "expected a number, got '" + v + "'", line_of(key));
    }
  }

  std::int64_t parse_int(const std::string& key, const std::string& v) const {
    try {
      std::size_t used = 0;
      const std::int64_t i = std::stoll(v, &used);
      if (used != v.size()) throw std::invalid_argument(v);
      return i;
    } catch (const std::exception&) {
      throw ConfigError(key, "expected an integer, got '" + v + "'", line_of(key));
    }
  }

  std::map<std::string, Entry> entries_;
  std::string raw_;
  std::string origin_;
};

}  // namespace iotauth
