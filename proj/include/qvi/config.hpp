#pragma once

#include <map>
#include <stdexcept>
#include <string>
#include <vector>

namespace qvi {

struct ConfigError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Line-oriented `key = value` text with `[section]` headers.  Keys are
// addressed as "section.key" ("key" for the header-less prefix).
class Config {
 public:
  static Config parse_file(const std::string& path);
  static Config parse_string(const std::string& text,
                             const std::string& origin = "<string>");

  bool has(const std::string& key) const { return entries_.count(key) > 0; }
  const std::string& get_string(const std::string& key) const;
  std::string get_string(const std::string& key, const std::string& fallback) const;
  double get_double(const std::string& key) const;
  double get_double(const std::string& key, double fallback) const;
  int get_int(const std::string& key, int fallback) const;
  // Comma-separated list of doubles; "inf" is accepted.
  std::vector<double> get_double_list(const std::string& key) const;

 private:
  std::map<std::string, std::string> entries_;
};

// One-column numeric text file (one value per line, blank lines and
// '#' comments skipped).
std::vector<double> read_column_file(const std::string& path);

}  // namespace qvi
