#pragma once

// Plain-text experiment configuration: one `key = value` per line, `#` starts
// a comment, lists are comma separated. Numeric values may be written as
// multiples of pi ("pi/5", "-0.5*pi", "3pi/4").

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <map>
#include <string>
#include <string_view>
#include <vector>

namespace qcadsr {

class Config {
 public:
  /// Throws ValidationError with `origin:line` on malformed lines or
  /// duplicate keys.
  static Config parse(std::string_view text, const std::string& origin = "<config>");
  /// Throws IoError if the file cannot be read.
  static Config load(const std::filesystem::path& path);

  /// Command-line override; replaces any value from the file.
  void set(const std::string& key, const std::string& value);
  bool has(const std::string& key) const;
  const std::map<std::string, std::string>& entries() const noexcept { return values_; }

  /// Throws ValidationError naming the first key not in `allowed`. Keys with
  /// prefix "tolerance." are accepted when allow_tolerances is set.
  void require_known(const std::vector<std::string_view>& allowed,
                     bool allow_tolerances = false) const;

  double get_double(const std::string& key, double fallback) const;
  std::vector<double> get_doubles(const std::string& key, std::vector<double> fallback) const;
  std::int64_t get_int(const std::string& key, std::int64_t fallback) const;
  std::uint64_t get_u64(const std::string& key, std::uint64_t fallback) const;
  std::string get_string(const std::string& key, const std::string& fallback) const;

 private:
  std::map<std::string, std::string> values_;
};

/// Parses a real number or a multiple of pi. Throws ValidationError naming
/// `key` on failure.
double parse_real(std::string_view text, const std::string& key);

}  // namespace qcadsr
