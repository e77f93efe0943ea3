#pragma once

// One-step unitary of the Dirac automaton, its Fourier form, the
// positive-frequency projection and the unitary action of deformed boosts on
// one-particle states.
//
// Fourier convention: psi^(k) = sum_x exp(-i k x) psi(x) on the centred grid
// of lattice.hpp. With it one step reads psi^'(k) = U(k) psi^(k) with
//   U(k) = [[n e^{ik}, -i m], [-i m, n e^{-ik}]],
// a symmetric matrix, so U(k)^T = U(k).

#include <array>
#include <complex>
#include <cstddef>
#include <cstdint>
#include <memory>
#include <span>
#include <vector>

#include "qcadsr/kinematics.hpp"
#include "qcadsr/lattice.hpp"

namespace qcadsr {

using Spinor = std::array<cplx, 2>;
using Mat2 = std::array<std::array<cplx, 2>, 2>;

/// Fourier matrix at one wave-vector and its eigen-decomposition.
/// U(k) = e^{-i omega} |e_plus><e_plus| + e^{+i omega} |e_minus><e_minus|.
/// e_plus carries the time dependence exp(-i omega t) and moves at +v(k).
/// Both eigenvectors are real; the first nonzero entry is positive.
struct UnitaryAtK {
  double k = 0.0;
  double omega = 0.0;
  Mat2 matrix{};
  std::array<double, 2> e_plus{};
  std::array<double, 2> e_minus{};
  /// True at m = 0, k in {0, +-pi} where U(k) is a multiple of the identity
  /// and the canonical basis is returned.
  bool degenerate = false;
};

UnitaryAtK eigensystem(double k, const MassParam& mass);

/// Positive-frequency amplitude over the N-point grid.
///
/// Stored as branch coefficients f_j = <e_plus(k_j)|psi^(k_j)> / sqrt(2 pi),
/// so that sum_j dk |f_j|^2 is the lattice norm of the branch. The amplitude
/// of the invariant-measure expansion psi = int dk mu(k) g(k) |k> is
/// g = f / sqrt(mu); g is reported as 0 where mu diverges.
class SpectralAmplitude {
 public:
  static SpectralAmplitude from_coefficients(std::vector<cplx> f, const MassParam& mass);

  std::size_t size() const noexcept;
  double dk() const noexcept;
  double k(std::size_t j) const;
  const MassParam& mass() const noexcept;

  const std::vector<cplx>& coefficients() const noexcept;
  /// mu(k_j); +infinity where the density diverges.
  double mu(std::size_t j) const;
  cplx g(std::size_t j) const;

  /// sum_j dk mu(k_j) |g(k_j)|^2, computed as sum_j dk |f_j|^2.
  double norm() const;

  /// Positive-branch spinor on the lattice with these coefficients.
  const LatticeState& embedded() const noexcept;

  /// Band-limited evaluation of f at arbitrary wave-vectors. Exact on grid
  /// points.
  std::vector<cplx> coefficients_at(std::span<const double> ks) const;
  std::vector<cplx> g_at(std::span<const double> ks) const;

 private:
  struct Data;
  explicit SpectralAmplitude(std::shared_ptr<const Data> d) : d_(std::move(d)) {}
  std::shared_ptr<const Data> d_;
};

/// One automaton step:
///   psi_r'(x) = n psi_r(x+1) - i m psi_l(x)
///   psi_l'(x) = -i m psi_r(x) + n psi_l(x-1)
LatticeState step_direct(const LatticeState& state, const MassParam& mass);

/// steps applications of step_direct.
LatticeState evolve_direct(const LatticeState& state, const MassParam& mass, std::int64_t steps);

/// The same evolution through the Fourier form, exact in T. Negative steps
/// evolve backwards.
LatticeState evolve_spectral(const LatticeState& state, const MassParam& mass,
                             std::int64_t steps);

/// Unit amplitude `internal` at cell x0, zero elsewhere. Throws DomainError if
/// x0 >= n_cells or |internal| differs from 1 by more than 1e-12.
LatticeState localized_state(std::size_t x0, const Spinor& internal, std::size_t n_cells);

struct BranchProjection {
  SpectralAmplitude amplitude;
  double positive_weight = 0.0;
  double negative_weight = 0.0;
};

BranchProjection project_positive_branch(const LatticeState& state, const MassParam& mass);

/// Lattice state of a positive-branch amplitude (the inverse of the projection
/// on that subspace).
LatticeState embed_positive_branch(const SpectralAmplitude& amp);

struct BoostOutcome {
  SpectralAmplitude amplitude;
  /// Weight of the input within 1e-6 of k = +-pi/2, where the off-grid
  /// evaluation degrades.
  double weight_near_fixed_point = 0.0;
  bool near_fixed_point_warning = false;
};

/// g'(k') = g(k(k')) with k(k') the inverse deformed boost of k', evaluated
/// through the band-limited interpolant. In coefficient form
/// f'(k') = f(k) sqrt(mu(k') / mu(k)).
BoostOutcome boost_state(const SpectralAmplitude& amp, const Boost& boost);

/// p(x) = |psi_r(x)|^2 + |psi_l(x)|^2.
std::vector<double> position_density(const LatticeState& state);

}  // namespace qcadsr
