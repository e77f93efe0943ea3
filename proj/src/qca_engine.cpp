#include "qcadsr/qca_engine.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "qcadsr/errors.hpp"
#include "qcadsr/fft.hpp"
#include "qcadsr/kernels.hpp"

namespace qcadsr {

namespace {

constexpr double kSqrt2Pi = 2.5066282746310005024;

// Involution P with U(k) = cos(omega) I - i sin(omega) P.
std::array<double, 4> involution(double k, const MassParam& mass, double sw) {
  if (sw == 0.0) return {1.0, 0.0, 0.0, -1.0};
  double ns = mass.n() * std::sin(k);
  return {-ns / sw, mass.m() / sw, mass.m() / sw, ns / sw};
}

double sin_omega(double k, const MassParam& mass) {
  double s = std::sin(k), c = mass.m() * std::cos(k);
  return std::sqrt(s * s + c * c);
}

void transform(const LatticeState& in, std::vector<cplx>& r_hat, std::vector<cplx>& l_hat) {
  r_hat.resize(in.size());
  l_hat.resize(in.size());
  fft::lattice_to_spectrum(in.r, r_hat);
  fft::lattice_to_spectrum(in.l, l_hat);
}

LatticeState inverse_transform(const std::vector<cplx>& r_hat, const std::vector<cplx>& l_hat) {
  LatticeState out = LatticeState::zeros(r_hat.size());
  fft::spectrum_to_lattice(r_hat, out.r);
  fft::spectrum_to_lattice(l_hat, out.l);
  return out;
}

}  // namespace

UnitaryAtK eigensystem(double k, const MassParam& mass) {
  UnitaryAtK u;
  u.k = k;
  const double n = mass.n(), m = mass.m();
  const double sw = sin_omega(k, mass);
  u.omega = std::atan2(sw, n * std::cos(k));
  u.matrix = {{{n * std::polar(1.0, k), cplx(0.0, -m)}, {cplx(0.0, -m), n * std::polar(1.0, -k)}}};
  if (sw == 0.0) {
    u.degenerate = true;
    u.e_plus = {1.0, 0.0};
    u.e_minus = {0.0, 1.0};
    return u;
  }
  // Two proportional forms of the same vector; pick the one without cancellation.
  double ns = n * std::sin(k);
  double a, b;
  if (ns >= 0.0) {
    a = m;
    b = sw + ns;
  } else {
    a = sw - ns;
    b = m;
  }
  double h = std::hypot(a, b);
  a /= h;
  b /= h;
  u.e_plus = {a, b};
  if (b > 0.0) {
    u.e_minus = {b, -a};
  } else {
    u.e_minus = {0.0, 1.0};
  }
  return u;
}

// ---------------------------------------------------------------- amplitude

struct SpectralAmplitude::Data {
  MassParam mass;
  std::vector<cplx> f;
  std::vector<double> mu;
  LatticeState embedded;
  // Interpolation window: cells x_start .. x_start + win_r.size() - 1 (not
  // reduced mod N) centred on the density maximum.
  long long x_start = 0;
  std::vector<cplx> win_r;
  std::vector<cplx> win_l;
};

SpectralAmplitude SpectralAmplitude::from_coefficients(std::vector<cplx> f, const MassParam& mass) {
  const std::size_t n = f.size();
  require_lattice_size(n);
  auto d = std::make_shared<Data>(Data{mass, std::move(f), {}, {}, 0, {}, {}});
  d->mu.resize(n);
  std::vector<cplx> r_hat(n), l_hat(n);
  for (std::size_t j = 0; j < n; ++j) {
    double k = grid_k(j, n);
    try {
      d->mu[j] = invariant_measure(k, mass);
    } catch (const DivergentMeasureError&) {
      d->mu[j] = std::numeric_limits<double>::infinity();
    }
    UnitaryAtK u = eigensystem(k, mass);
    cplx s = kSqrt2Pi * d->f[j];
    r_hat[j] = s * u.e_plus[0];
    l_hat[j] = s * u.e_plus[1];
  }
  d->embedded = inverse_transform(r_hat, l_hat);

  std::vector<double> dens = position_density(d->embedded);
  auto peak = static_cast<long long>(std::max_element(dens.begin(), dens.end()) - dens.begin());
  double cut = dens[static_cast<std::size_t>(peak)] * 1e-32;
  const auto nn = static_cast<long long>(n);
  // Signed centre: off the grid the phase slope follows the representative.
  const long long first = signed_cell(peak, n) - nn / 2;
  auto at = [&](long long s) { return static_cast<std::size_t>(((first + s) % nn + nn) % nn); };
  long long lo = 0, hi = nn - 1;
  while (lo < hi && dens[at(lo)] <= cut) ++lo;
  while (hi > lo && dens[at(hi)] <= cut) --hi;
  d->x_start = first + lo;
  for (long long s = lo; s <= hi; ++s) {
    d->win_r.push_back(d->embedded.r[at(s)]);
    d->win_l.push_back(d->embedded.l[at(s)]);
  }
  return SpectralAmplitude(std::move(d));
}

std::size_t SpectralAmplitude::size() const noexcept { return d_->f.size(); }
double SpectralAmplitude::dk() const noexcept { return grid_spacing(size()); }
double SpectralAmplitude::k(std::size_t j) const { return grid_k(j, size()); }
const MassParam& SpectralAmplitude::mass() const noexcept { return d_->mass; }
const std::vector<cplx>& SpectralAmplitude::coefficients() const noexcept { return d_->f; }
double SpectralAmplitude::mu(std::size_t j) const { return d_->mu[j]; }

cplx SpectralAmplitude::g(std::size_t j) const {
  double mu = d_->mu[j];
  return std::isinf(mu) ? cplx(0.0, 0.0) : d_->f[j] / std::sqrt(mu);
}

double SpectralAmplitude::norm() const {
  double s = 0.0;
  for (const cplx& v : d_->f) s += std::norm(v);
  return s * dk();
}

const LatticeState& SpectralAmplitude::embedded() const noexcept { return d_->embedded; }

std::vector<cplx> SpectralAmplitude::coefficients_at(std::span<const double> ks) const {
  const auto& kt = kernels::active();
  std::vector<cplx> r_hat(ks.size()), l_hat(ks.size()), out(ks.size());
  kt.trig_series(d_->win_r, ks, r_hat);
  kt.trig_series(d_->win_l, ks, l_hat);
  const double x0 = static_cast<double>(d_->x_start);
  for (std::size_t i = 0; i < ks.size(); ++i) {
    cplx shift = std::polar(1.0, -ks[i] * x0);
    UnitaryAtK u = eigensystem(ks[i], d_->mass);
    out[i] = shift * (u.e_plus[0] * r_hat[i] + u.e_plus[1] * l_hat[i]) / kSqrt2Pi;
  }
  return out;
}

std::vector<cplx> SpectralAmplitude::g_at(std::span<const double> ks) const {
  std::vector<cplx> f = coefficients_at(ks);
  for (std::size_t i = 0; i < ks.size(); ++i) {
    try {
      f[i] /= std::sqrt(invariant_measure(ks[i], d_->mass));
    } catch (const DivergentMeasureError&) {
      f[i] = 0.0;
    }
  }
  return f;
}

// ---------------------------------------------------------------- evolution

LatticeState step_direct(const LatticeState& state, const MassParam& mass) {
  LatticeState out = LatticeState::zeros(state.size());
  kernels::active().qca_step(state.r, state.l, out.r, out.l, mass.n(), mass.m());
  return out;
}

LatticeState evolve_direct(const LatticeState& state, const MassParam& mass, std::int64_t steps) {
  if (steps < 0) throw DomainError("direct evolution needs steps >= 0");
  const auto& kt = kernels::active();
  LatticeState a = state;
  LatticeState b = LatticeState::zeros(state.size());
  for (std::int64_t t = 0; t < steps; ++t) {
    kt.qca_step(a.r, a.l, b.r, b.l, mass.n(), mass.m());
    std::swap(a, b);
  }
  return a;
}

LatticeState evolve_spectral(const LatticeState& state, const MassParam& mass,
                             std::int64_t steps) {
  const std::size_t n = state.size();
  require_lattice_size(n);
  if (steps == 0) return state;
  std::vector<cplx> r_hat, l_hat;
  transform(state, r_hat, l_hat);
  std::vector<cplx> a00(n), a01(n), a10(n), a11(n);
  const double t = static_cast<double>(steps);
  for (std::size_t j = 0; j < n; ++j) {
    double k = grid_k(j, n);
    double sw = sin_omega(k, mass);
    double omega = std::atan2(sw, mass.n() * std::cos(k));
    auto p = involution(k, mass, sw);
    double c = std::cos(omega * t), s = std::sin(omega * t);
    // U^T = cos(omega T) I - i sin(omega T) P
    a00[j] = cplx(c, -s * p[0]);
    a01[j] = cplx(0.0, -s * p[1]);
    a10[j] = cplx(0.0, -s * p[2]);
    a11[j] = cplx(c, -s * p[3]);
  }
  kernels::active().mode_transform(a00, a01, a10, a11, r_hat, l_hat);
  return inverse_transform(r_hat, l_hat);
}

LatticeState localized_state(std::size_t x0, const Spinor& internal, std::size_t n_cells) {
  if (x0 >= n_cells) {
    throw DomainError("x0 = " + std::to_string(x0) + " outside lattice of " +
                      std::to_string(n_cells) + " cells");
  }
  double nrm = std::norm(internal[0]) + std::norm(internal[1]);
  if (std::abs(nrm - 1.0) > 1e-12) throw DomainError("internal state must have unit norm");
  LatticeState s = LatticeState::zeros(n_cells);
  s.r[x0] = internal[0];
  s.l[x0] = internal[1];
  return s;
}

// ---------------------------------------------------------------- branches

BranchProjection project_positive_branch(const LatticeState& state, const MassParam& mass) {
  const std::size_t n = state.size();
  require_lattice_size(n);
  std::vector<cplx> r_hat, l_hat;
  transform(state, r_hat, l_hat);
  std::vector<cplx> f(n);
  double pos = 0.0, neg = 0.0;
  for (std::size_t j = 0; j < n; ++j) {
    UnitaryAtK u = eigensystem(grid_k(j, n), mass);
    cplx cp = u.e_plus[0] * r_hat[j] + u.e_plus[1] * l_hat[j];
    cplx cm = u.e_minus[0] * r_hat[j] + u.e_minus[1] * l_hat[j];
    f[j] = cp / kSqrt2Pi;
    pos += std::norm(cp);
    neg += std::norm(cm);
  }
  const double scale = 1.0 / static_cast<double>(n);
  return {SpectralAmplitude::from_coefficients(std::move(f), mass), pos * scale, neg * scale};
}

LatticeState embed_positive_branch(const SpectralAmplitude& amp) { return amp.embedded(); }

BoostOutcome boost_state(const SpectralAmplitude& amp, const Boost& boost) {
  const std::size_t n = amp.size();
  const MassParam& mass = amp.mass();
  BoostOutcome out{amp, 0.0, false};
  double total = 0.0;
  for (std::size_t j = 0; j < n; ++j) {
    double w = std::norm(amp.coefficients()[j]) * amp.dk();
    total += w;
    if (std::abs(std::abs(amp.k(j)) - kHalfPi) < 1e-6) out.weight_near_fixed_point += w;
  }
  out.near_fixed_point_warning = out.weight_near_fixed_point > 1e-10 * total;
  if (boost.beta() == 0.0) return out;

  const Boost back = boost.inverse();
  std::vector<double> src(n), ratio(n);
  for (std::size_t j = 0; j < n; ++j) {
    double kp = amp.k(j);
    OnShellPoint pre = deformed_boost(dispersion(kp, mass), back);
    src[j] = pre.k;
    ratio[j] = measure_ratio(pre.k, kp, boost, mass);
  }
  std::vector<cplx> f = amp.coefficients_at(src);
  for (std::size_t j = 0; j < n; ++j) f[j] *= std::sqrt(ratio[j]);
  out.amplitude = SpectralAmplitude::from_coefficients(std::move(f), mass);
  return out;
}

std::vector<double> position_density(const LatticeState& state) {
  std::vector<double> d(state.size());
  kernels::active().density(state.r, state.l, d);
  return d;
}

}  // namespace qcadsr
