#pragma once

// Kinematics of the one-dimensional Dirac automaton.
//
// The automaton dispersion relation cos^2(omega) = (1 - m^2) cos^2(k) is not
// invariant under linear Lorentz boosts. It is invariant under the deformed
// boost D^-1 o L_beta o D, where D(omega, k) = (sin(omega)/cos(k), tan(k))
// sends the mass shell onto the hyperbola E^2 - p^2 = m^2. Everything here is
// a pure function of its arguments.

#include <numbers>
#include <utility>

namespace qcadsr {

inline constexpr double kPi = std::numbers::pi;
inline constexpr double kHalfPi = std::numbers::pi / 2.0;

/// Inputs closer than this to k = +-pi/2 are treated as the fixed point.
inline constexpr double kFixedPointGuard = 1e-9;

/// Automaton mass m in Planck units together with n = sqrt(1 - m^2).
class MassParam {
 public:
  /// Throws DomainError unless m is in [0, 1].
  static MassParam make(double m);

  double m() const noexcept { return m_; }
  double n() const noexcept { return n_; }

 private:
  MassParam(double m, double n) : m_(m), n_(n) {}
  double m_;
  double n_;
};

/// Boost velocity beta in (-1, 1) and gamma = (1 - beta^2)^(-1/2).
class Boost {
 public:
  /// Throws DomainError unless |beta| < 1.
  static Boost make(double beta);

  double beta() const noexcept { return beta_; }
  double gamma() const noexcept { return gamma_; }
  Boost inverse() const { return make(-beta_); }

 private:
  Boost(double beta, double gamma) : beta_(beta), gamma_(gamma) {}
  double beta_;
  double gamma_;
};

/// The two boost-invariant halves of the Brillouin zone.
/// B1 = [-pi/2, pi/2], B2 = [-pi, -pi/2) u (pi/2, pi].
enum class Region { B1, B2 };

const char* to_string(Region r) noexcept;

Region region_of(double k) noexcept;

/// True when k lies within kFixedPointGuard of +-pi/2.
bool is_fixed_point(double k) noexcept;

struct OnShellPoint {
  double omega = 0.0;
  double k = 0.0;
  Region region = Region::B1;
};

/// Image of (omega, k) under D.
struct PseudoEnergyMomentum {
  double E = 0.0;
  double p = 0.0;
};

/// Plain (omega, k) pair without the on-shell contract.
struct FrequencyWaveVector {
  double omega = 0.0;
  double k = 0.0;
};

/// omega(k) = arccos(n cos k) on [0, pi]. Requires k in [-pi, pi].
OnShellPoint dispersion(double k, const MassParam& mass);

/// d omega / dk = n sin k / sin omega. At m = 0 the removable singularities
/// take the sign of k (0 at k = 0).
double group_velocity(double k, const MassParam& mass);

/// D(omega, k) = (sin omega / cos k, tan k). Throws SingularPointError at
/// k = +-pi/2.
PseudoEnergyMomentum dmap(double omega, double k);
inline PseudoEnergyMomentum dmap(const OnShellPoint& pt) { return dmap(pt.omega, pt.k); }

/// Branch-aware inverse of D. The returned k lies in the requested region and
/// omega is folded to [0, pi/2] on B1 and [pi/2, pi] on B2 for on-shell input.
/// Throws OutOfRangeError if |E cos k| > 1 + 1e-12.
OnShellPoint dmap_inverse(const PseudoEnergyMomentum& ep, Region region);

/// Linear boost (gamma (omega - beta k), gamma (k - beta omega)).
FrequencyWaveVector standard_boost(double omega, double k, const Boost& boost);

/// Closed-form deformed boost. Region B2 is handled by conjugating with the
/// reflection k -> sign(k) pi - k. Fixed points k = +-pi/2 pass through.
OnShellPoint deformed_boost(const OnShellPoint& pt, const Boost& boost);

/// The same boost evaluated as the composition D^-1 o L_beta o D on an
/// arbitrary (omega, k), i.e. without using the mass shell.
FrequencyWaveVector deformed_boost_map(double omega, double k, Region region,
                                       const Boost& boost);

/// Density of the boost-invariant measure on the mass shell,
/// mu(k) = [2 |cos k| sin omega(k)]^-1, i.e. dp/(2E) pulled back through D.
/// Throws DivergentMeasureError where cos k = 0 or sin omega = 0.
double invariant_measure(double k, const MassParam& mass);

/// mu(k') / mu(k) for k' = deformed_boost(k), which equals |dk/dk'|. Finite at
/// the fixed points where each density diverges separately.
double measure_ratio(double k, double k_boosted, const Boost& boost, const MassParam& mass);

/// Relativistic velocity addition (beta1 + beta2) / (1 + beta1 beta2).
Boost velocity_composition(const Boost& b1, const Boost& b2);

}  // namespace qcadsr
