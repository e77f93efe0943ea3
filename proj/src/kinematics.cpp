#include "qcadsr/kinematics.hpp"

#include <cmath>
#include <string>

#include "qcadsr/errors.hpp"

namespace qcadsr {

namespace {

// Reflection k -> sign(k) pi - k exchanging B2 with B1 at fixed omega.
// sign(0) is taken from `hint` so that 0 maps back onto the side it came from.
double reflect(double k, double hint) {
  double s = (k > 0.0) ? 1.0 : (k < 0.0 ? -1.0 : (hint < 0.0 ? -1.0 : 1.0));
  return s * kPi - k;
}

// sin(omega(k)) without the cancellation of sqrt(1 - n^2 cos^2 k).
double sin_omega(double k, const MassParam& mass) {
  double s = std::sin(k);
  double c = mass.m() * std::cos(k);
  return std::sqrt(s * s + c * c);
}

}  // namespace

MassParam MassParam::make(double m) {
  if (!(m >= 0.0 && m <= 1.0)) {
    throw DomainError("mass must lie in [0, 1], got " + std::to_string(m));
  }
  return MassParam(m, std::sqrt((1.0 - m) * (1.0 + m)));
}

Boost Boost::make(double beta) {
  if (!(std::abs(beta) < 1.0)) {
    throw DomainError("boost velocity must satisfy |beta| < 1, got " + std::to_string(beta));
  }
  return Boost(beta, 1.0 / std::sqrt((1.0 - beta) * (1.0 + beta)));
}

const char* to_string(Region r) noexcept { return r == Region::B1 ? "B1" : "B2"; }

Region region_of(double k) noexcept { return std::abs(k) <= kHalfPi ? Region::B1 : Region::B2; }

bool is_fixed_point(double k) noexcept { return std::abs(std::abs(k) - kHalfPi) < kFixedPointGuard; }

OnShellPoint dispersion(double k, const MassParam& mass) {
  if (!(k >= -kPi && k <= kPi)) {
    throw DomainError("wave-vector must lie in [-pi, pi], got " + std::to_string(k));
  }
  // atan2 keeps full relative accuracy for small omega where arccos does not.
  double omega = std::atan2(sin_omega(k, mass), mass.n() * std::cos(k));
  return {omega, k, region_of(k)};
}

double group_velocity(double k, const MassParam& mass) {
  if (!(k >= -kPi && k <= kPi)) {
    throw DomainError("wave-vector must lie in [-pi, pi], got " + std::to_string(k));
  }
  double s = sin_omega(k, mass);
  if (s == 0.0) {
    // m = 0 and k in {0, +-pi}: omega = |k| so v = sign(k).
    return (k > 0.0) ? 1.0 : (k < 0.0 ? -1.0 : 0.0);
  }
  return mass.n() * std::sin(k) / s;
}

PseudoEnergyMomentum dmap(double omega, double k) {
  if (is_fixed_point(k)) {
    throw SingularPointError("D is singular at k = +-pi/2 (k = " + std::to_string(k) + ")");
  }
  double c = std::cos(k);
  return {std::sin(omega) / c, std::tan(k)};
}

OnShellPoint dmap_inverse(const PseudoEnergyMomentum& ep, Region region) {
  double k = std::atan(ep.p);
  if (region == Region::B2) {
    // Same tangent, other half of the zone.
    k = (k > 0.0) ? k - kPi : k + kPi;
  }
  // E cos k with cos k = +-1/sqrt(1 + p^2); the sign of cos k is the region's.
  const double sgn = region == Region::B1 ? 1.0 : -1.0;
  const double s = sgn * ep.E / std::hypot(1.0, ep.p);
  if (std::abs(s) > 1.0 + 1e-12) {
    throw OutOfRangeError("D^-1 undefined: |E cos k| = " + std::to_string(std::abs(s)) + " > 1");
  }
  // cos^2 omega = cos^2 k (1 - (E - p)(E + p)). The common factor |cos k|
  // drops out of atan2, which keeps omega accurate next to k = +-pi/2.
  double q = 1.0 - (ep.E - ep.p) * (ep.E + ep.p);
  double cw = std::sqrt(q > 0.0 ? q : 0.0);
  double omega = std::atan2(sgn * ep.E, sgn * cw);
  return {omega, k, region};
}

FrequencyWaveVector standard_boost(double omega, double k, const Boost& boost) {
  double g = boost.gamma(), b = boost.beta();
  return {g * (omega - b * k), g * (k - b * omega)};
}

OnShellPoint deformed_boost(const OnShellPoint& pt, const Boost& boost) {
  if (is_fixed_point(pt.k) || boost.beta() == 0.0) return pt;
  if (pt.region == Region::B2) {
    // R maps the B2 shell onto the B1 shell: k -> sign(k) pi - k, omega -> pi - omega.
    OnShellPoint mirrored{kPi - pt.omega, reflect(pt.k, pt.k), Region::B1};
    OnShellPoint out = deformed_boost(mirrored, boost);
    return {kPi - out.omega, reflect(out.k, pt.k), Region::B2};
  }
  double g = boost.gamma(), b = boost.beta();
  double ck = std::cos(pt.k);
  double E = std::sin(pt.omega) / ck;
  double p = std::tan(pt.k);
  double k_out = std::atan(g * (p - b * E));
  // omega' = arcsin(E' cos k'). On the shell tan omega' = E' / n with
  // n = cos omega / cos k, which stays well conditioned where arcsin does not.
  double e_out = g * (E - b * p);
  double n = std::cos(pt.omega) / ck;
  return {std::atan2(e_out, n), k_out, Region::B1};
}

FrequencyWaveVector deformed_boost_map(double omega, double k, Region region, const Boost& boost) {
  if (is_fixed_point(k)) {
    throw SingularPointError("D is singular at k = +-pi/2 (k = " + std::to_string(k) + ")");
  }
  // Same chain as dmap -> standard_boost -> dmap_inverse, carried in long
  // double. Near k = +-pi/2 the inverse sees E' ~ p' ~ 1/cos k and recovers
  // cos omega' from 1 - (E' - p')(E' + p'); double rounding of E', p' alone
  // costs ~eps E' there.
  using ld = long double;
  const ld pi = 3.141592653589793238462643383279502884L;
  ld c = std::cos(static_cast<ld>(k));
  ld E = std::sin(static_cast<ld>(omega)) / c;
  ld p = std::tan(static_cast<ld>(k));
  ld g = 1.0L / std::sqrt((1.0L - boost.beta()) * (1.0L + boost.beta()));
  ld b = boost.beta();
  ld e2 = g * (E - b * p), p2 = g * (p - b * E);
  ld k2 = std::atan(p2);
  if (region == Region::B2) k2 = (k2 > 0.0L) ? k2 - pi : k2 + pi;
  const ld sgn = region == Region::B1 ? 1.0L : -1.0L;
  ld s = sgn * e2 / std::sqrt(1.0L + p2 * p2);
  if (std::abs(s) > 1.0L + 1e-12L) {
    throw OutOfRangeError("D^-1 undefined: |E cos k| = " + std::to_string(static_cast<double>(std::abs(s))) + " > 1");
  }
  ld q = 1.0L - (e2 - p2) * (e2 + p2);
  ld cw = std::sqrt(q > 0.0L ? q : 0.0L);
  ld w2 = std::atan2(sgn * e2, sgn * cw);
  return {static_cast<double>(w2), static_cast<double>(k2)};
}

double invariant_measure(double k, const MassParam& mass) {
  double ck = std::abs(std::cos(k));
  double sw = sin_omega(k, mass);
  // At m = 0 sin omega = |sin k| vanishes at k = +-pi, where the double nearest
  // pi leaves a 1e-16 residue.
  if (is_fixed_point(k) || sw == 0.0 || (mass.m() == 0.0 && std::abs(k) == kPi)) {
    throw DivergentMeasureError("invariant measure diverges at k = " + std::to_string(k));
  }
  return 1.0 / (2.0 * ck * sw);
}

double measure_ratio(double k, double k_boosted, const Boost& boost, const MassParam& mass) {
  double g = boost.gamma(), b = boost.beta();
  if (is_fixed_point(k)) {
    // Near k = +-pi/2 the boost acts as eps -> eps / (gamma (1 -+ beta)).
    return k > 0.0 ? g * (1.0 - b) : g * (1.0 + b);
  }
  double sw = sin_omega(k, mass);
  double sw_b = sin_omega(k_boosted, mass);
  if (sw == 0.0 || sw_b == 0.0) {
    // m = 0 at k in {0, +-pi}: one-sided limit of tan k' = gamma (1 - beta) tan k.
    return k < 0.0 ? 1.0 / (g * (1.0 + b)) : 1.0 / (g * (1.0 - b));
  }
  return (std::abs(std::cos(k)) * sw) / (std::abs(std::cos(k_boosted)) * sw_b);
}

Boost velocity_composition(const Boost& b1, const Boost& b2) {
  return Boost::make((b1.beta() + b2.beta()) / (1.0 + b1.beta() * b2.beta()));
}

}  // namespace qcadsr
