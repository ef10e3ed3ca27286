#include "qgalloy/config.hpp"

#include <cctype>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "qgalloy/errors.hpp"

namespace qgalloy {

namespace {

std::string trim(const std::string& s) {
  std::size_t b = 0;
  std::size_t e = s.size();
  while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
  while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
  return s.substr(b, e - b);
}

std::uint64_t fnv1a(const std::string& bytes) {
  std::uint64_t h = 1469598103934665603ull;
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 1099511628211ull;
  }
  return h;
}

[[noreturn]] void fail_at(const std::string& name, int line, const std::string& what) {
  std::ostringstream ss;
  ss << name << ": line " << line << ": " << what;
  throw InputError(ss.str());
}

std::vector<std::string> split_ws(const std::string& text) {
  std::istringstream in(text);
  std::vector<std::string> out;
  std::string token;
  while (in >> token) out.push_back(token);
  return out;
}

double parse_double(const std::string& dotted, const std::string& text) {
  try {
    std::size_t pos = 0;
    const double v = std::stod(text, &pos);
    while (pos < text.size() && std::isspace(static_cast<unsigned char>(text[pos]))) ++pos;
    if (pos != text.size()) throw std::invalid_argument("trailing characters");
    return v;
  } catch (const InputError&) {
    throw;
  } catch (const std::exception&) {
    throw InputError(dotted + ": expected a number, got '" + text + "'");
  }
}

long long parse_int(const std::string& dotted, const std::string& text) {
  try {
    std::size_t pos = 0;
    const long long v = std::stoll(text, &pos);
    while (pos < text.size() && std::isspace(static_cast<unsigned char>(text[pos]))) ++pos;
    if (pos != text.size()) throw std::invalid_argument("trailing characters");
    return v;
  } catch (const InputError&) {
    throw;
  } catch (const std::exception&) {
    throw InputError(dotted + ": expected an integer, got '" + text + "'");
  }
}

}  // namespace

ConfigFile ConfigFile::parse_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InputError(path + ": cannot open config file");
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_text(ss.str(), path);
}

ConfigFile ConfigFile::parse_text(const std::string& text, const std::string& name) {
  ConfigFile cfg;
  cfg.name_ = name;
  cfg.hash_ = fnv1a(text);
  std::istringstream in(text);
  std::string raw;
  std::string section;
  int line = 0;
  while (std::getline(in, raw)) {
    ++line;
    const std::string s = trim(raw);
    if (s.empty() || s[0] == '#') continue;
    if (s.front() == '[') {
      if (s.size() < 3 || s.back() != ']') fail_at(name, line, "malformed section header");
      section = trim(s.substr(1, s.size() - 2));
      if (section.empty()) fail_at(name, line, "empty section name");
      cfg.sections_[section];
      continue;
    }
    const std::size_t eq = s.find('=');
    if (eq == std::string::npos) fail_at(name, line, "expected `key = value`");
    if (section.empty()) fail_at(name, line, "key outside any [section]");
    const std::string key = trim(s.substr(0, eq));
    const std::string value = trim(s.substr(eq + 1));
    if (key.empty()) fail_at(name, line, "empty key");
    cfg.sections_[section][key] = value;
  }
  return cfg;
}

void ConfigFile::set(const std::string& dotted, const std::string& value) {
  const std::size_t dot = dotted.find('.');
  if (dot == std::string::npos || dot == 0 || dot + 1 == dotted.size())
    throw InputError("override key must be `section.key`, got '" + dotted + "'");
  sections_[dotted.substr(0, dot)][dotted.substr(dot + 1)] = value;
}

bool ConfigFile::has(const std::string& section, const std::string& key) const {
  const auto sec = sections_.find(section);
  return sec != sections_.end() && sec->second.count(key) > 0;
}

std::string ConfigFile::get(const std::string& section, const std::string& key) const {
  const auto sec = sections_.find(section);
  if (sec != sections_.end()) {
    const auto kv = sec->second.find(key);
    if (kv != sec->second.end()) return kv->second;
  }
  throw InputError(section + "." + key + ": missing required key");
}

std::string ConfigFile::get_or(const std::string& section, const std::string& key,
                               const std::string& fallback) const {
  return has(section, key) ? get(section, key) : fallback;
}

double ConfigFile::get_double(const std::string& section, const std::string& key) const {
  return parse_double(section + "." + key, get(section, key));
}

double ConfigFile::get_double_or(const std::string& section, const std::string& key,
                                 double fallback) const {
  return has(section, key) ? get_double(section, key) : fallback;
}

long long ConfigFile::get_int(const std::string& section, const std::string& key) const {
  return parse_int(section + "." + key, get(section, key));
}

long long ConfigFile::get_int_or(const std::string& section, const std::string& key,
                                 long long fallback) const {
  return has(section, key) ? get_int(section, key) : fallback;
}

std::vector<double> ConfigFile::get_doubles(const std::string& section,
                                            const std::string& key) const {
  const std::string dotted = section + "." + key;
  std::vector<double> out;
  for (const std::string& token : split_ws(get(section, key)))
    out.push_back(parse_double(dotted, token));
  return out;
}

std::vector<long long> ConfigFile::get_ints(const std::string& section,
                                            const std::string& key) const {
  const std::string dotted = section + "." + key;
  std::vector<long long> out;
  for (const std::string& token : split_ws(get(section, key)))
    out.push_back(parse_int(dotted, token));
  return out;
}

}  // namespace qgalloy
