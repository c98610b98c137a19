#pragma once

#include <istream>
#include <map>
#include <set>
#include <string>
#include <vector>

#include "sbvp/common.hpp"
#include "sbvp/json_util.hpp"

namespace sbvp {

// Flat INI file: [section] headers, key = value lines, '#' or ';' comments.
// Every key must be known to the schema; typed getters record the values they resolve.
class Config {
 public:
  using Schema = std::map<std::string, std::set<std::string>>;

  static Config parse(std::istream& in, const std::string& origin = "<config>");
  static Config load(const std::string& path);

  void validate(const Schema& schema) const;

  bool has(const std::string& section, const std::string& key) const;
  bool has_section(const std::string& section) const;

  std::string get_string(const std::string& section, const std::string& key, const std::string& fallback) const;
  std::string require_string(const std::string& section, const std::string& key) const;
  double get_double(const std::string& section, const std::string& key, double fallback) const;
  int get_int(const std::string& section, const std::string& key, int fallback) const;
  bool get_bool(const std::string& section, const std::string& key, bool fallback) const;
  Complex get_complex(const std::string& section, const std::string& key, Complex fallback) const;
  std::vector<double> get_list(const std::string& section, const std::string& key,
                               const std::vector<double>& fallback) const;
  std::vector<int> get_int_list(const std::string& section, const std::string& key,
                                const std::vector<int>& fallback) const;
  std::vector<Complex> get_complex_list(const std::string& section, const std::string& key,
                                        const std::vector<Complex>& fallback) const;
  // Rows separated by ';', entries by ','.
  RMat get_matrix(const std::string& section, const std::string& key, const RMat& fallback) const;

  // Every value read so far, defaults included, as strings.
  Json resolved() const;
  const std::string& origin() const { return origin_; }

 private:
  std::string raw(const std::string& section, const std::string& key) const;
  void record(const std::string& section, const std::string& key, const std::string& value) const;

  std::string origin_;
  std::map<std::string, std::map<std::string, std::string>> values_;
  std::map<std::string, int> lines_;  // "section.key" -> line number
  mutable std::map<std::string, std::map<std::string, std::string>> used_;
};

Complex parse_complex(const std::string& text);
std::string format_complex(Complex z);

}  // namespace sbvp
