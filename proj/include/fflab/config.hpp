#pragma once

#include <algorithm>
#include <cctype>
#include <cstdint>
#include <fstream>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include "fflab/arith.hpp"
#include "fflab/errors.hpp"

// Key-value config with [section] headers, '#' or ';' comments, and all big
// integers written as decimal strings. Parsed into nested string maps;
// typed getters convert on access. The canonical serialization (sections and
// keys sorted, exact "key=value" lines) feeds a 64-bit FNV-1a hash used as
// the cache key, so formatting and comment noise never change identity.

namespace fflab {

struct Config {
  std::map<std::string, std::map<std::string, std::string>> sections;

  bool has(const std::string& section, const std::string& key) const {
    auto s = sections.find(section);
    return s != sections.end() && s->second.count(key) > 0;
  }
  const std::string& get(const std::string& section, const std::string& key) const {
    auto s = sections.find(section);
    if (s == sections.end()) throw InvalidInput("config: missing section [" + section + "]");
    auto k = s->second.find(key);
    if (k == s->second.end()) throw InvalidInput("config: missing key '" + key + "' in [" + section + "]");
    return k->second;
  }
  std::string get_or(const std::string& section, const std::string& key, const std::string& fallback) const {
    return has(section, key) ? get(section, key) : fallback;
  }
};

namespace detail {

inline std::string trim(const std::string& s) {
  std::size_t b = 0, e = s.size();
  while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
  while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
  return s.substr(b, e - b);
}

}  // namespace detail

inline Config parse_config(std::istream& in) {
  Config cfg;
  std::string line, section;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    std::string t = detail::trim(line);
    if (t.empty() || t[0] == '#' || t[0] == ';') continue;
    if (t.front() == '[') {
      if (t.back() != ']') throw InvalidInput("config line " + std::to_string(lineno) + ": unterminated section");
      section = detail::trim(t.substr(1, t.size() - 2));
      if (section.empty()) throw InvalidInput("config line " + std::to_string(lineno) + ": empty section name");
      cfg.sections[section];  // a section may legitimately stay empty
      continue;
    }
    std::size_t eq = t.find('=');
    if (eq == std::string::npos)
      throw InvalidInput("config line " + std::to_string(lineno) + ": expected key=value");
    std::string key = detail::trim(t.substr(0, eq));
    std::string val = detail::trim(t.substr(eq + 1));
    if (key.empty()) throw InvalidInput("config line " + std::to_string(lineno) + ": empty key");
    if (section.empty()) throw InvalidInput("config line " + std::to_string(lineno) + ": key before any [section]");
    if (cfg.sections[section].count(key))
      throw InvalidInput("config line " + std::to_string(lineno) + ": duplicate key '" + key + "'");
    cfg.sections[section][key] = val;
  }
  return cfg;
}

inline Config load_config(const std::string& path) {
  std::ifstream f(path);
  if (!f) throw InvalidInput("config: cannot open " + path);
  return parse_config(f);
}

// typed getters ---------------------------------------------------------------

inline Natural config_natural(const Config& c, const std::string& s, const std::string& k) {
  return parse_natural(c.get(s, k));
}

inline Rational config_rational(const Config& c, const std::string& s, const std::string& k) {
  return parse_rational(c.get(s, k));
}

inline unsigned long config_count(const Config& c, const std::string& s, const std::string& k) {
  return to_u64(parse_natural(c.get(s, k)));
}

inline bool config_bool(const Config& c, const std::string& s, const std::string& k) {
  std::string v = c.get(s, k);
  if (v == "true" || v == "1" || v == "yes") return true;
  if (v == "false" || v == "0" || v == "no") return false;
  throw InvalidInput("config: '" + v + "' is not a boolean");
}

inline std::vector<std::string> config_list(const Config& c, const std::string& s, const std::string& k) {
  std::vector<std::string> out;
  std::stringstream ss(c.get(s, k));
  std::string item;
  while (std::getline(ss, item, ',')) {
    item = detail::trim(item);
    if (!item.empty()) out.push_back(item);
  }
  if (out.empty()) throw InvalidInput("config: list '" + k + "' in [" + s + "] is empty");
  return out;
}

// canonical form and hash -----------------------------------------------------

inline std::string canonical_serialization(const Config& c) {
  std::string out;
  for (const auto& [sec, kv] : c.sections) {  // std::map is already sorted
    out += '[';
    out += sec;
    out += "]\n";
    for (const auto& [k, v] : kv) {
      out += k;
      out += '=';
      out += v;
      out += '\n';
    }
  }
  return out;
}

inline std::uint64_t fnv1a64(const std::string& data) {
  std::uint64_t h = 14695981039346656037ull;
  for (unsigned char b : data) {
    h ^= b;
    h *= 1099511628211ull;
  }
  return h;
}

inline std::string hash_hex(std::uint64_t h) {
  static const char* digits = "0123456789abcdef";
  std::string s(16, '0');
  for (int k = 15; k >= 0; --k) {
    s[static_cast<std::size_t>(k)] = digits[h & 0xf];
    h >>= 4;
  }
  return s;
}

inline std::string config_hash(const Config& c) { return hash_hex(fnv1a64(canonical_serialization(c))); }

// Hash of one section only; the universe cache keys on the [universe] block
// so unrelated experiment settings do not fork the cache.
inline std::string section_hash(const Config& c, const std::string& section) {
  Config sub;
  auto it = c.sections.find(section);
  if (it != c.sections.end()) sub.sections[section] = it->second;
  return config_hash(sub);
}

}  // namespace fflab
