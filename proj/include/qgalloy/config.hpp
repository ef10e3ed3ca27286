#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

namespace qgalloy {

// Flat `key = value` file with [section] headers and # comments.  Parse
// errors carry 1-based line numbers.  Values keep their raw text; typed
// getters convert on demand and name the offending section/key.
class ConfigFile {
 public:
  static ConfigFile parse_file(const std::string& path);
  static ConfigFile parse_text(const std::string& text, const std::string& name);

  // dotted key "section.key"
  void set(const std::string& dotted, const std::string& value);

  bool has(const std::string& section, const std::string& key) const;
  std::string get(const std::string& section, const std::string& key) const;
  std::string get_or(const std::string& section, const std::string& key,
                     const std::string& fallback) const;
  double get_double(const std::string& section, const std::string& key) const;
  double get_double_or(const std::string& section, const std::string& key, double fallback) const;
  long long get_int(const std::string& section, const std::string& key) const;
  long long get_int_or(const std::string& section, const std::string& key,
                       long long fallback) const;
  std::vector<double> get_doubles(const std::string& section, const std::string& key) const;
  std::vector<long long> get_ints(const std::string& section, const std::string& key) const;

  std::uint64_t content_hash() const { return hash_; }  // FNV-1a of the raw bytes
  const std::string& name() const { return name_; }

 private:
  std::map<std::string, std::map<std::string, std::string>> sections_;
  std::string name_;
  std::uint64_t hash_ = 0;
};

}  // namespace qgalloy
