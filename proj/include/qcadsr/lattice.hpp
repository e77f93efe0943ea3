#pragma once

// Periodic one-particle lattice states and the matching wave-vector grid.

#include <complex>
#include <cstddef>
#include <numbers>
#include <vector>

namespace qcadsr {

using cplx = std::complex<double>;

/// Two complex amplitudes (psi_r, psi_l) per cell on a ring of N cells,
/// stored as two contiguous arrays.
struct LatticeState {
  std::vector<cplx> r;
  std::vector<cplx> l;

  static LatticeState zeros(std::size_t n_cells);

  std::size_t size() const noexcept { return r.size(); }
  /// sum_x |psi_r(x)|^2 + |psi_l(x)|^2
  double norm() const;
};

/// k_j = -pi + 2 pi j / N.
double grid_k(std::size_t j, std::size_t n_cells);
std::vector<double> brillouin_grid(std::size_t n_cells);
inline double grid_spacing(std::size_t n_cells) {
  return 2.0 * std::numbers::pi / static_cast<double>(n_cells);
}

/// Representative of x modulo N in [-N/2, N/2).
long long signed_cell(long long x, std::size_t n_cells);

/// Throws ValidationError unless n_cells is even and at least 4.
void require_lattice_size(std::size_t n_cells);

}  // namespace qcadsr
