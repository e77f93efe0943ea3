#include "qcadsr/config.hpp"

#include <algorithm>
#include <cctype>
#include <cerrno>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <numbers>
#include <sstream>

#include "qcadsr/errors.hpp"

namespace qcadsr {

namespace {

std::string trim(std::string_view s) {
  std::size_t a = 0, b = s.size();
  while (a < b && std::isspace(static_cast<unsigned char>(s[a]))) ++a;
  while (b > a && std::isspace(static_cast<unsigned char>(s[b - 1]))) --b;
  return std::string(s.substr(a, b - a));
}

bool parse_plain(const std::string& s, double& out) {
  if (s.empty()) return false;
  errno = 0;
  char* end = nullptr;
  out = std::strtod(s.c_str(), &end);
  return errno == 0 && end == s.c_str() + s.size() && std::isfinite(out);
}

std::vector<std::string> split_list(const std::string& s) {
  std::vector<std::string> items;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, ',')) items.push_back(trim(item));
  return items;
}

}  // namespace

double parse_real(std::string_view text, const std::string& key) {
  std::string s = trim(text);
  double v = 0.0;
  if (parse_plain(s, v)) return v;
  // [sign][a][*]pi[/b]
  std::string t;
  for (char c : s) {
    if (!std::isspace(static_cast<unsigned char>(c))) t.push_back(c);
  }
  auto pos = t.find("pi");
  if (pos != std::string::npos) {
    std::string head = t.substr(0, pos);
    std::string tail = t.substr(pos + 2);
    double a = 1.0, b = 1.0;
    if (!head.empty() && head.back() == '*') head.pop_back();
    bool ok = true;
    if (head == "-") {
      a = -1.0;
    } else if (head == "+" || head.empty()) {
      a = 1.0;
    } else {
      ok = parse_plain(head, a);
    }
    if (ok && !tail.empty()) ok = tail[0] == '/' && parse_plain(tail.substr(1), b) && b != 0.0;
    if (ok) return a * std::numbers::pi / b;
  }
  throw ValidationError("key '" + key + "': expected a number, got '" + s + "'");
}

Config Config::parse(std::string_view text, const std::string& origin) {
  Config cfg;
  std::istringstream in{std::string(text)};
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    std::string body = trim(line);
    if (body.empty()) continue;
    auto eq = body.find('=');
    const std::string where = origin + ":" + std::to_string(lineno);
    if (eq == std::string::npos) throw ValidationError(where + ": expected 'key = value'");
    std::string key = trim(std::string_view(body).substr(0, eq));
    std::string value = trim(std::string_view(body).substr(eq + 1));
    if (key.empty()) throw ValidationError(where + ": empty key");
    if (value.empty()) throw ValidationError(where + ": empty value for '" + key + "'");
    if (cfg.values_.count(key) != 0) throw ValidationError(where + ": duplicate key '" + key + "'");
    cfg.values_[key] = value;
  }
  return cfg;
}

Config Config::load(const std::filesystem::path& path) {
  std::ifstream f(path);
  if (!f) throw IoError("cannot read config file " + path.string());
  std::stringstream ss;
  ss << f.rdbuf();
  if (f.bad()) throw IoError("error reading config file " + path.string());
  return parse(ss.str(), path.string());
}

void Config::set(const std::string& key, const std::string& value) { values_[key] = value; }

bool Config::has(const std::string& key) const { return values_.count(key) != 0; }

void Config::require_known(const std::vector<std::string_view>& allowed,
                           bool allow_tolerances) const {
  for (const auto& [key, value] : values_) {
    if (allow_tolerances && key.rfind("tolerance.", 0) == 0) continue;
    if (std::find(allowed.begin(), allowed.end(), key) == allowed.end()) {
      throw ValidationError("unknown key '" + key + "' for this experiment");
    }
  }
}

double Config::get_double(const std::string& key, double fallback) const {
  auto it = values_.find(key);
  if (it == values_.end()) return fallback;
  return parse_real(it->second, key);
}

std::vector<double> Config::get_doubles(const std::string& key,
                                        std::vector<double> fallback) const {
  auto it = values_.find(key);
  if (it == values_.end()) return fallback;
  std::vector<double> out;
  for (const auto& item : split_list(it->second)) out.push_back(parse_real(item, key));
  if (out.empty()) throw ValidationError("key '" + key + "': list must be nonempty");
  return out;
}

std::int64_t Config::get_int(const std::string& key, std::int64_t fallback) const {
  auto it = values_.find(key);
  if (it == values_.end()) return fallback;
  const std::string& s = it->second;
  errno = 0;
  char* end = nullptr;
  long long v = std::strtoll(s.c_str(), &end, 10);
  if (errno != 0 || end != s.c_str() + s.size()) {
    throw ValidationError("key '" + key + "': expected an integer, got '" + s + "'");
  }
  return v;
}

std::uint64_t Config::get_u64(const std::string& key, std::uint64_t fallback) const {
  auto it = values_.find(key);
  if (it == values_.end()) return fallback;
  const std::string& s = it->second;
  errno = 0;
  char* end = nullptr;
  unsigned long long v = std::strtoull(s.c_str(), &end, 10);
  if (s.empty() || s[0] == '-' || errno != 0 || end != s.c_str() + s.size()) {
    throw ValidationError("key '" + key + "': expected an unsigned integer, got '" + s + "'");
  }
  return v;
}

std::string Config::get_string(const std::string& key, const std::string& fallback) const {
  auto it = values_.find(key);
  return it == values_.end() ? fallback : it->second;
}

}  // namespace qcadsr
