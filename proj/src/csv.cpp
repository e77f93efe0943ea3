#include "qcadsr/csv.hpp"

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>
#include <system_error>

#include "qcadsr/errors.hpp"

namespace qcadsr {

std::string format_double(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

void CsvTable::add_row(std::vector<std::string> cells) {
  if (cells.size() != header_.size()) {
    throw DomainError("CSV row has " + std::to_string(cells.size()) + " cells, header has " +
                      std::to_string(header_.size()));
  }
  rows_.push_back(std::move(cells));
}

std::string CsvTable::str() const {
  std::string out;
  auto line = [&](const std::vector<std::string>& cells) {
    for (std::size_t i = 0; i < cells.size(); ++i) {
      if (i) out += ',';
      out += cells[i];
    }
    out += '\n';
  };
  line(header_);
  for (const auto& r : rows_) line(r);
  return out;
}

void write_file_atomic(const std::filesystem::path& path, const std::string& content) {
  namespace fs = std::filesystem;
  std::error_code ec;
  if (path.has_parent_path()) {
    fs::create_directories(path.parent_path(), ec);
    if (ec) throw IoError("cannot create directory " + path.parent_path().string() + ": " + ec.message());
  }
  fs::path tmp = path;
  tmp += ".tmp";
  {
    std::ofstream f(tmp, std::ios::binary | std::ios::trunc);
    if (!f) throw IoError("cannot open " + tmp.string() + " for writing");
    f.write(content.data(), static_cast<std::streamsize>(content.size()));
    f.flush();
    if (!f) throw IoError("error writing " + tmp.string());
  }
  fs::rename(tmp, path, ec);
  if (ec) {
    fs::remove(tmp, ec);
    throw IoError("cannot move output into place at " + path.string());
  }
}

std::string read_file(const std::filesystem::path& path) {
  std::ifstream f(path, std::ios::binary);
  if (!f) throw IoError("cannot read " + path.string());
  std::stringstream ss;
  ss << f.rdbuf();
  return ss.str();
}

std::string state_csv(const LatticeState& state) {
  CsvTable t({"x", "re_psi_r", "im_psi_r", "re_psi_l", "im_psi_l"});
  for (std::size_t x = 0; x < state.size(); ++x) {
    t.add_row({std::to_string(x), format_double(state.r[x].real()), format_double(state.r[x].imag()),
               format_double(state.l[x].real()), format_double(state.l[x].imag())});
  }
  return t.str();
}

std::string spectral_csv(const SpectralAmplitude& amp) {
  CsvTable t({"k", "re_g", "im_g", "mu"});
  for (std::size_t j = 0; j < amp.size(); ++j) {
    cplx g = amp.g(j);
    t.add_row({format_double(amp.k(j)), format_double(g.real()), format_double(g.imag()),
               format_double(amp.mu(j))});
  }
  return t.str();
}

std::size_t CsvData::column(const std::string& name) const {
  for (std::size_t i = 0; i < header.size(); ++i) {
    if (header[i] == name) return i;
  }
  throw ValidationError("CSV has no column '" + name + "'");
}

CsvData parse_csv(const std::string& text) {
  CsvData d;
  std::istringstream in(text);
  std::string line;
  bool first = true;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    std::vector<std::string> cells;
    std::stringstream ss(line);
    std::string cell;
    while (std::getline(ss, cell, ',')) cells.push_back(cell);
    if (first) {
      d.header = std::move(cells);
      first = false;
      continue;
    }
    if (cells.size() != d.header.size()) throw ValidationError("CSV row width differs from header");
    d.rows.push_back(std::move(cells));
  }
  if (first) throw ValidationError("CSV is empty (missing header)");
  return d;
}

LatticeState parse_state_csv(const std::string& text) {
  CsvData d = parse_csv(text);
  const std::size_t cx = d.column("x"), c1 = d.column("re_psi_r"), c2 = d.column("im_psi_r"),
                    c3 = d.column("re_psi_l"), c4 = d.column("im_psi_l");
  LatticeState s = LatticeState::zeros(d.rows.size());
  auto num = [](const std::string& v) {
    char* end = nullptr;
    double r = std::strtod(v.c_str(), &end);
    if (v.empty() || end != v.c_str() + v.size()) throw ValidationError("bad number '" + v + "' in state CSV");
    return r;
  };
  for (std::size_t i = 0; i < d.rows.size(); ++i) {
    const auto& row = d.rows[i];
    double xv = num(row[cx]);
    if (xv != static_cast<double>(i)) throw ValidationError("state CSV rows must list x = 0 .. N-1 in order");
    s.r[i] = {num(row[c1]), num(row[c2])};
    s.l[i] = {num(row[c3]), num(row[c4])};
  }
  return s;
}

void KeyValueReport::add(const std::string& key, const std::string& value) {
  text_ += key + " = " + value + "\n";
}

void KeyValueReport::add(const std::string& key, double value) { add(key, format_double(value)); }

void KeyValueReport::comment(const std::string& text) { text_ += "# " + text + "\n"; }

}  // namespace qcadsr
