#include "qcadsr/lattice.hpp"

#include <string>

#include "qcadsr/errors.hpp"
#include "qcadsr/kernels.hpp"
#include "qcadsr/kinematics.hpp"

namespace qcadsr {

LatticeState LatticeState::zeros(std::size_t n_cells) {
  return {std::vector<cplx>(n_cells), std::vector<cplx>(n_cells)};
}

double LatticeState::norm() const {
  std::vector<double> d(size());
  kernels::active().density(r, l, d);
  double s = 0.0;
  for (double v : d) s += v;
  return s;
}

double grid_k(std::size_t j, std::size_t n_cells) {
  return -kPi + 2.0 * kPi * static_cast<double>(j) / static_cast<double>(n_cells);
}

std::vector<double> brillouin_grid(std::size_t n_cells) {
  std::vector<double> ks(n_cells);
  for (std::size_t j = 0; j < n_cells; ++j) ks[j] = grid_k(j, n_cells);
  return ks;
}

long long signed_cell(long long x, std::size_t n_cells) {
  const auto n = static_cast<long long>(n_cells);
  long long r = ((x % n) + n) % n;
  return r >= n / 2 ? r - n : r;
}

void require_lattice_size(std::size_t n_cells) {
  if (n_cells < 4 || n_cells % 2 != 0) {
    throw ValidationError("cells must be even and >= 4, got " + std::to_string(n_cells));
  }
}

}  // namespace qcadsr
