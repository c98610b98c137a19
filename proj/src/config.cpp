#include "sbvp/config.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

namespace sbvp {

namespace {

std::string trim(const std::string& s) {
  size_t a = 0, b = s.size();
  while (a < b && std::isspace(static_cast<unsigned char>(s[a]))) ++a;
  while (b > a && std::isspace(static_cast<unsigned char>(s[b - 1]))) --b;
  return s.substr(a, b - a);
}

std::string lower(std::string s) {
  for (char& c : s) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  return s;
}

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::string cur;
  std::istringstream in(s);
  while (std::getline(in, cur, sep)) out.push_back(trim(cur));
  if (!s.empty() && s.back() == sep) out.push_back("");
  return out;
}

[[noreturn]] void bad(const std::string& where, const std::string& what) {
  throw Error(ErrorKind::Config, where + ": " + what);
}

double parse_double(const std::string& text, const std::string& where) {
  const std::string t = trim(text);
  if (t.empty()) bad(where, "empty number");
  size_t pos = 0;
  double v = 0.0;
  try {
    v = std::stod(t, &pos);
  } catch (const std::exception&) {
    bad(where, "not a number: '" + t + "'");
  }
  if (pos != t.size()) bad(where, "not a number: '" + t + "'");
  return v;
}

std::string fmt(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

}  // namespace

Complex parse_complex(const std::string& text) {
  std::string t;
  for (char c : text)
    if (!std::isspace(static_cast<unsigned char>(c))) t += c;
  if (t.empty()) throw Error(ErrorKind::Config, "empty complex number");
  if (t.back() != 'i' && t.back() != 'j') return parse_double(t, "complex");
  t.pop_back();
  // Split at the last sign that is not part of an exponent.
  size_t cut = std::string::npos;
  for (size_t k = t.size(); k-- > 1;) {
    if ((t[k] == '+' || t[k] == '-') && t[k - 1] != 'e' && t[k - 1] != 'E') {
      cut = k;
      break;
    }
  }
  auto imag_part = [](const std::string& s) {
    if (s.empty() || s == "+") return 1.0;
    if (s == "-") return -1.0;
    return parse_double(s, "complex");
  };
  if (cut == std::string::npos) return Complex(0.0, imag_part(t));
  return Complex(parse_double(t.substr(0, cut), "complex"), imag_part(t.substr(cut)));
}

std::string format_complex(Complex z) {
  if (z.imag() == 0.0) return fmt(z.real());
  std::string im = fmt(z.imag());
  if (im[0] != '-') im = "+" + im;
  return fmt(z.real()) + im + "i";
}

Config Config::parse(std::istream& in, const std::string& origin) {
  Config c;
  c.origin_ = origin;
  std::string line, section;
  int number = 0;
  while (std::getline(in, line)) {
    ++number;
    const std::string where = origin + ":" + std::to_string(number);
    // ';' is also the matrix row separator, so only a leading ';' starts a comment.
    std::string body = trim(line.substr(0, line.find('#')));
    if (body.empty() || body.front() == ';') continue;
    if (body.front() == '[') {
      if (body.back() != ']') bad(where, "unterminated section header");
      section = lower(trim(body.substr(1, body.size() - 2)));
      if (section.empty()) bad(where, "empty section name");
      c.values_[section];
      continue;
    }
    const size_t eq = body.find('=');
    if (eq == std::string::npos) bad(where, "expected key = value");
    if (section.empty()) bad(where, "key outside of any section");
    const std::string key = lower(trim(body.substr(0, eq)));
    if (key.empty()) bad(where, "empty key");
    if (c.values_[section].count(key)) bad(where, "duplicate key '" + key + "'");
    c.values_[section][key] = trim(body.substr(eq + 1));
    c.lines_[section + "." + key] = number;
  }
  return c;
}

Config Config::load(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorKind::Config, "cannot open config file '" + path + "'");
  return parse(in, path);
}

void Config::validate(const Schema& schema) const {
  for (const auto& [section, keys] : values_) {
    auto it = schema.find(section);
    if (it == schema.end()) throw Error(ErrorKind::Config, origin_ + ": unknown section [" + section + "]");
    for (const auto& [key, value] : keys) {
      if (!it->second.count(key)) {
        throw Error(ErrorKind::Config, origin_ + ":" + std::to_string(lines_.at(section + "." + key)) +
                                           ": unknown key '" + key + "' in [" + section + "]");
      }
    }
  }
}

bool Config::has(const std::string& section, const std::string& key) const {
  auto it = values_.find(section);
  return it != values_.end() && it->second.count(key);
}

bool Config::has_section(const std::string& section) const { return values_.count(section) > 0; }

std::string Config::raw(const std::string& section, const std::string& key) const {
  return values_.at(section).at(key);
}

void Config::record(const std::string& section, const std::string& key, const std::string& value) const {
  used_[section][key] = value;
}

std::string Config::get_string(const std::string& section, const std::string& key, const std::string& fallback) const {
  const std::string v = has(section, key) ? raw(section, key) : fallback;
  record(section, key, v);
  return v;
}

std::string Config::require_string(const std::string& section, const std::string& key) const {
  if (!has(section, key)) throw Error(ErrorKind::Config, origin_ + ": missing key '" + key + "' in [" + section + "]");
  return get_string(section, key, "");
}

double Config::get_double(const std::string& section, const std::string& key, double fallback) const {
  const double v = has(section, key) ? parse_double(raw(section, key), section + "." + key) : fallback;
  record(section, key, fmt(v));
  return v;
}

int Config::get_int(const std::string& section, const std::string& key, int fallback) const {
  int v = fallback;
  if (has(section, key)) {
    const double d = parse_double(raw(section, key), section + "." + key);
    if (d != std::floor(d) || std::fabs(d) > 2e9) bad(section + "." + key, "expected an integer");
    v = static_cast<int>(d);
  }
  record(section, key, std::to_string(v));
  return v;
}

bool Config::get_bool(const std::string& section, const std::string& key, bool fallback) const {
  bool v = fallback;
  if (has(section, key)) {
    const std::string t = lower(raw(section, key));
    if (t == "true" || t == "yes" || t == "on" || t == "1") v = true;
    else if (t == "false" || t == "no" || t == "off" || t == "0") v = false;
    else bad(section + "." + key, "expected a boolean");
  }
  record(section, key, v ? "true" : "false");
  return v;
}

Complex Config::get_complex(const std::string& section, const std::string& key, Complex fallback) const {
  Complex v = fallback;
  if (has(section, key)) {
    try {
      v = parse_complex(raw(section, key));
    } catch (const Error& e) {
      bad(section + "." + key, e.what());
    }
  }
  record(section, key, format_complex(v));
  return v;
}

std::vector<double> Config::get_list(const std::string& section, const std::string& key,
                                     const std::vector<double>& fallback) const {
  std::vector<double> v = fallback;
  if (has(section, key)) {
    v.clear();
    const std::string r = raw(section, key);
    if (!r.empty())
      for (const auto& part : split(r, ',')) v.push_back(parse_double(part, section + "." + key));
  }
  std::string s;
  for (size_t k = 0; k < v.size(); ++k) s += (k ? ", " : "") + fmt(v[k]);
  record(section, key, s);
  return v;
}

std::vector<int> Config::get_int_list(const std::string& section, const std::string& key,
                                      const std::vector<int>& fallback) const {
  std::vector<int> v = fallback;
  if (has(section, key)) {
    v.clear();
    const std::string r = raw(section, key);
    if (!r.empty()) {
      for (const auto& part : split(r, ',')) {
        const double d = parse_double(part, section + "." + key);
        if (d != std::floor(d)) bad(section + "." + key, "expected integers");
        v.push_back(static_cast<int>(d));
      }
    }
  }
  std::string s;
  for (size_t k = 0; k < v.size(); ++k) s += (k ? ", " : "") + std::to_string(v[k]);
  record(section, key, s);
  return v;
}

std::vector<Complex> Config::get_complex_list(const std::string& section, const std::string& key,
                                              const std::vector<Complex>& fallback) const {
  std::vector<Complex> v = fallback;
  if (has(section, key)) {
    v.clear();
    const std::string r = raw(section, key);
    if (!r.empty()) {
      for (const auto& part : split(r, ',')) {
        try {
          v.push_back(parse_complex(part));
        } catch (const Error& e) {
          bad(section + "." + key, e.what());
        }
      }
    }
  }
  std::string s;
  for (size_t k = 0; k < v.size(); ++k) s += (k ? ", " : "") + format_complex(v[k]);
  record(section, key, s);
  return v;
}

RMat Config::get_matrix(const std::string& section, const std::string& key, const RMat& fallback) const {
  RMat m = fallback;
  if (has(section, key)) {
    const auto rows = split(raw(section, key), ';');
    std::vector<std::vector<double>> data;
    for (const auto& r : rows) {
      if (r.empty()) continue;
      std::vector<double> row;
      for (const auto& part : split(r, ',')) row.push_back(parse_double(part, section + "." + key));
      data.push_back(row);
    }
    if (data.empty()) bad(section + "." + key, "empty matrix");
    m.resize(static_cast<Eigen::Index>(data.size()), static_cast<Eigen::Index>(data[0].size()));
    for (size_t i = 0; i < data.size(); ++i) {
      if (data[i].size() != data[0].size()) bad(section + "." + key, "ragged matrix rows");
      for (size_t j = 0; j < data[i].size(); ++j) m(i, j) = data[i][j];
    }
  }
  std::string s;
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    if (i) s += "; ";
    for (Eigen::Index j = 0; j < m.cols(); ++j) s += (j ? ", " : "") + fmt(m(i, j));
  }
  record(section, key, s);
  return m;
}

Json Config::resolved() const {
  Json j = Json::object();
  for (const auto& [section, keys] : used_) {
    Json s = Json::object();
    for (const auto& [key, value] : keys) s[key] = value;
    j[section] = s;
  }
  return j;
}

}  // namespace sbvp
