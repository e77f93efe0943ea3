#pragma once

// CSV and key-value output. Comma separated, '.' decimal point, mandatory
// header, doubles at 17 significant digits so values read back bit-exact.
// Files are written to a temporary name and renamed into place.

#include <filesystem>
#include <string>
#include <utility>
#include <vector>

#include "qcadsr/lattice.hpp"
#include "qcadsr/qca_engine.hpp"

namespace qcadsr {

/// printf("%.17g"); "inf"/"nan" spelled as such.
std::string format_double(double v);

class CsvTable {
 public:
  explicit CsvTable(std::vector<std::string> header) : header_(std::move(header)) {}

  /// One cell per header column; throws DomainError on a width mismatch.
  void add_row(std::vector<std::string> cells);
  std::string str() const;
  std::size_t rows() const noexcept { return rows_.size(); }

 private:
  std::vector<std::string> header_;
  std::vector<std::vector<std::string>> rows_;
};

/// Throws IoError naming the path.
void write_file_atomic(const std::filesystem::path& path, const std::string& content);
std::string read_file(const std::filesystem::path& path);

/// Columns: x, re_psi_r, im_psi_r, re_psi_l, im_psi_l.
std::string state_csv(const LatticeState& state);
/// Columns: k, re_g, im_g, mu. mu is written as "inf" where it diverges.
std::string spectral_csv(const SpectralAmplitude& amp);

/// Inverse of state_csv. Throws ValidationError on a malformed table.
LatticeState parse_state_csv(const std::string& text);

/// Parsed CSV with a header row; cells kept as text.
struct CsvData {
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;
  std::size_t column(const std::string& name) const;
};
CsvData parse_csv(const std::string& text);

/// "key = value" lines in insertion order.
class KeyValueReport {
 public:
  void add(const std::string& key, const std::string& value);
  void add(const std::string& key, double value);
  void comment(const std::string& text);
  std::string str() const { return text_; }

 private:
  std::string text_;
};

}  // namespace qcadsr
