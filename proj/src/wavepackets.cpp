#include "qcadsr/wavepackets.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "qcadsr/errors.hpp"

namespace qcadsr {

namespace {

// Wrap an angle difference into [-pi, pi).
double wrap_angle(double d) {
  d = std::fmod(d + kPi, 2.0 * kPi);
  if (d < 0.0) d += 2.0 * kPi;
  return d - kPi;
}

double ring_offset(double x, double centre, double n) {
  double d = std::fmod(x - centre + n / 2.0, n);
  if (d < 0.0) d += n;
  return d - n / 2.0;
}

void require_support(const GaussianPacket& spec) {
  if (!(spec.sigma_k > 0.0)) throw ValidationError("sigma_k must be > 0");
  if (!(spec.k0 >= -kPi && spec.k0 <= kPi)) throw ValidationError("k0 must lie in [-pi, pi]");
  const double reach = 5.0 * spec.sigma_k;
  auto too_close = [&](double kc) { return std::abs(wrap_angle(spec.k0 - kc)) <= reach; };
  if (too_close(kHalfPi) || too_close(-kHalfPi)) {
    throw SupportError("packet k0 = " + std::to_string(spec.k0) + " with 5 sigma_k = " +
                       std::to_string(reach) + " reaches a fixed point +-pi/2");
  }
  if (spec.mass.m() == 0.0 && (too_close(0.0) || too_close(kPi))) {
    throw SupportError("massless packet support reaches k = 0 or pi where the measure diverges");
  }
}

}  // namespace

SpectralAmplitude make_packet(const GaussianPacket& spec, std::size_t n_cells) {
  require_lattice_size(n_cells);
  require_support(spec);
  std::vector<cplx> f(n_cells);
  double s = 0.0;
  const double dk = grid_spacing(n_cells);
  for (std::size_t j = 0; j < n_cells; ++j) {
    double k = grid_k(j, n_cells);
    double d = wrap_angle(k - spec.k0);
    double env = std::exp(-d * d / (4.0 * spec.sigma_k * spec.sigma_k));
    if (env == 0.0) continue;
    double mu;
    try {
      mu = invariant_measure(k, spec.mass);
    } catch (const DivergentMeasureError&) {
      continue;
    }
    f[j] = std::sqrt(mu) * env * std::polar(1.0, -k * spec.x0);
    s += std::norm(f[j]) * dk;
  }
  const double scale = 1.0 / std::sqrt(s);
  for (auto& v : f) v *= scale;
  return SpectralAmplitude::from_coefficients(std::move(f), spec.mass);
}

double locate_peak(std::span<const double> density) {
  const std::size_t n = density.size();
  if (n < 3) throw NumericalError("density too short for a peak fit");
  const std::size_t i = static_cast<std::size_t>(
      std::max_element(density.begin(), density.end()) - density.begin());
  const double top = density[i];
  if (!(top > 0.0)) throw NumericalError("density is identically zero");

  // Cells above half maximum must form a single run on the ring.
  std::size_t runs = 0;
  for (std::size_t x = 0; x < n; ++x) {
    bool here = density[x] > 0.5 * top;
    bool prev = density[(x + n - 1) % n] > 0.5 * top;
    if (here && !prev) ++runs;
  }
  if (runs > 1) {
    throw MultiPeakError("density has " + std::to_string(runs) + " separate maxima above half peak");
  }

  const double ym = density[(i + n - 1) % n];
  const double yp = density[(i + 1) % n];
  const double den = ym - 2.0 * top + yp;
  double off = 0.0;
  if (den < 0.0) off = std::clamp(0.5 * (ym - yp) / den, -0.5, 0.5);
  double x = static_cast<double>(i) + off;
  if (x < 0.0) x += static_cast<double>(n);
  return x;
}

double density_width(std::span<const double> density) {
  const double n = static_cast<double>(density.size());
  const double peak = locate_peak(density);
  double w = 0.0, m1 = 0.0, m2 = 0.0;
  for (std::size_t x = 0; x < density.size(); ++x) {
    double d = ring_offset(static_cast<double>(x), peak, n);
    w += density[x];
    m1 += density[x] * d;
    m2 += density[x] * d * d;
  }
  m1 /= w;
  return std::sqrt(std::max(0.0, m2 / w - m1 * m1));
}

PacketWidth packet_width(const SpectralAmplitude& amp) {
  PacketWidth out;
  out.cells = density_width(position_density(amp.embedded()));
  const auto& f = amp.coefficients();
  std::vector<double> w(f.size());
  for (std::size_t j = 0; j < f.size(); ++j) w[j] = std::norm(f[j]);
  // Same ring moments, in units of the grid spacing.
  out.k = density_width(w) * amp.dk();
  return out;
}

Trajectory fit_trajectory(const SpectralAmplitude& amp, std::span<const std::int64_t> t_samples) {
  if (t_samples.size() < 2) throw ValidationError("trajectory fit needs at least 2 time samples");
  const std::size_t n = amp.size();
  const double nd = static_cast<double>(n);
  const LatticeState start = amp.embedded();
  Trajectory tr;
  for (std::size_t s = 0; s < t_samples.size(); ++s) {
    LatticeState st = evolve_spectral(start, amp.mass(), t_samples[s]);
    std::vector<double> dens = position_density(st);
    double p = locate_peak(dens);
    double width = density_width(dens);
    double x = (p >= nd / 2.0) ? p - nd : p;
    if (s > 0) x += nd * std::round((tr.x.back() - x) / nd);
    if (std::abs(x) > nd / 2.0 - 5.0 * width) {
      throw WrapAroundError("packet at x = " + std::to_string(x) + " (width " +
                            std::to_string(width) + ") reaches the periodic seam at t = " +
                            std::to_string(t_samples[s]));
    }
    tr.t.push_back(static_cast<double>(t_samples[s]));
    tr.x.push_back(x);
  }
  const double m = static_cast<double>(tr.t.size());
  double st = 0.0, sx = 0.0;
  for (std::size_t i = 0; i < tr.t.size(); ++i) {
    st += tr.t[i];
    sx += tr.x[i];
  }
  const double tb = st / m, xb = sx / m;
  double stt = 0.0, stx = 0.0;
  for (std::size_t i = 0; i < tr.t.size(); ++i) {
    stt += (tr.t[i] - tb) * (tr.t[i] - tb);
    stx += (tr.t[i] - tb) * (tr.x[i] - xb);
  }
  if (stt == 0.0) throw ValidationError("trajectory fit needs distinct time samples");
  tr.v = stx / stt;
  tr.x_ref = xb - tr.v * tb;
  double r2 = 0.0;
  for (std::size_t i = 0; i < tr.t.size(); ++i) {
    double r = tr.x[i] - tr.at(tr.t[i]);
    r2 += r * r;
  }
  tr.residual_rms = std::sqrt(r2 / m);
  return tr;
}

Event intersect(const Trajectory& a, const Trajectory& b) {
  const double dv = a.v - b.v;
  if (std::abs(dv) < 1e-9) {
    throw ParallelTrajectoriesError("trajectories are parallel (|v_a - v_b| = " +
                                    std::to_string(std::abs(dv)) + ")");
  }
  double t = (b.x_ref - a.x_ref) / dv;
  // Average both line evaluations so the result does not depend on the order.
  double x = 0.5 * (a.at(t) + b.at(t));
  return {t, x};
}

SpacetimeBoostMatrix spacetime_boost_matrix(double k0, const Boost& boost, const MassParam& mass) {
  constexpr double kMinDistance = 1e-3;
  if (std::abs(std::abs(k0) - kHalfPi) < kMinDistance) {
    throw NearSingularError("k0 = " + std::to_string(k0) + " is within 1e-3 of a fixed point");
  }
  const OnShellPoint lab = dispersion(k0, mass);
  const OnShellPoint out = deformed_boost(lab, boost);
  if (std::abs(std::abs(out.k) - kHalfPi) < kMinDistance) {
    throw NearSingularError("boosted wave-vector " + std::to_string(out.k) +
                            " is within 1e-3 of a fixed point");
  }
  const double cw = std::cos(lab.omega);
  if (std::abs(cw) < 1e-9) {
    throw NearSingularError("cos omega vanishes at k0 = " + std::to_string(k0) +
                            "; the space-time map is singular");
  }
  // J of D at the boosted point.
  const double ckp = std::cos(out.k);
  const double jd00 = std::cos(out.omega) / ckp;
  const double jd01 = std::sin(out.omega) * std::sin(out.k) / (ckp * ckp);
  const double jd11 = 1.0 / (ckp * ckp);
  // Inverse boost in the (E, p) plane.
  const double g = boost.gamma(), b = boost.beta();
  const double l00 = g, l01 = g * b, l10 = g * b, l11 = g;
  // J of D^-1 at the lab point.
  const double ck = std::cos(lab.k);
  const double ji00 = ck / cw;
  const double ji01 = -std::sin(lab.omega) * std::sin(lab.k) * ck / cw;
  const double ji11 = ck * ck;

  const double m00 = l00 * jd00, m01 = l00 * jd01 + l01 * jd11;
  const double m10 = l10 * jd00, m11 = l10 * jd01 + l11 * jd11;
  const double dw_dwp = ji00 * m00 + ji01 * m10;
  const double dw_dkp = ji00 * m01 + ji01 * m11;
  const double dk_dwp = ji11 * m10;
  const double dk_dkp = ji11 * m11;
  return {dw_dwp, -dk_dwp, -dw_dkp, dk_dkp};
}

Event boost_event(const Event& event, double k0, const Boost& boost, const MassParam& mass) {
  return spacetime_boost_matrix(k0, boost, mass).apply(event);
}

namespace {

std::vector<std::int64_t> sample_times(double centre, double span, int count) {
  std::vector<std::int64_t> ts;
  for (int i = 0; i < count; ++i) {
    double f = count == 1 ? 0.0 : -1.0 + 2.0 * i / (count - 1);
    ts.push_back(static_cast<std::int64_t>(std::llround(centre + f * span)));
  }
  return ts;
}

double distance(const Event& a, const Event& b) { return std::hypot(a.t - b.t, a.x - b.x); }

double pair_noise(const PairResult& p) {
  double dv = std::abs(p.plus.v - p.minus.v);
  return std::sqrt(2.0) * std::max(p.plus.residual_rms, p.minus.residual_rms) / dv;
}

}  // namespace

RelativeLocalityReport relative_locality_experiment(const RelativeLocalityParams& params) {
  require_lattice_size(params.n_cells);
  if (params.samples < 2) throw ValidationError("samples must be >= 2");
  if (!(params.time_span > 0.0)) throw ValidationError("time_span must be > 0");
  const MassParam mass = MassParam::make(params.mass);
  const Boost boost = Boost::make(params.beta);
  const Event e = params.event;

  RelativeLocalityReport rep;
  rep.params = params;
  const double ks[2] = {params.k1, params.k2};
  std::vector<SpectralAmplitude> amps;

  const auto lab_times = sample_times(e.t, params.time_span, params.samples);
  for (int i = 0; i < 2; ++i) {
    if (std::abs(ks[i]) < 1e-12) throw ValidationError("pair wave-vectors must be nonzero");
    rep.lab[i].k = ks[i];
    for (int s = 0; s < 2; ++s) {
      double k = s == 0 ? ks[i] : -ks[i];
      double x_ref = e.x - group_velocity(k, mass) * e.t;
      amps.push_back(make_packet({k, params.sigma_k, x_ref, mass}, params.n_cells));
      Trajectory tr = fit_trajectory(amps.back(), lab_times);
      (s == 0 ? rep.lab[i].plus : rep.lab[i].minus) = tr;
    }
    rep.lab[i].intersection = intersect(rep.lab[i].plus, rep.lab[i].minus);
    // First-order image of each member's line: through M(k) E with slope v(k').
    Trajectory line[2];
    for (int s = 0; s < 2; ++s) {
      double k = s == 0 ? ks[i] : -ks[i];
      Event img = boost_event(e, k, boost, mass);
      line[s].v = group_velocity(deformed_boost(dispersion(k, mass), boost).k, mass);
      line[s].x_ref = img.x - line[s].v * img.t;
    }
    rep.predicted[i] = intersect(line[0], line[1]);
    rep.image[i] = boost_event(e, ks[i], boost, mass);
  }

  const double tc = 0.5 * (rep.predicted[0].t + rep.predicted[1].t);
  const auto boosted_times = sample_times(tc, params.time_span, params.samples);
  for (int i = 0; i < 2; ++i) {
    rep.boosted[i].k = ks[i];
    for (int s = 0; s < 2; ++s) {
      BoostOutcome bo = boost_state(amps[static_cast<std::size_t>(2 * i + s)], boost);
      rep.positive_weight_min = std::min(rep.positive_weight_min, bo.amplitude.norm());
      Trajectory tr = fit_trajectory(bo.amplitude, boosted_times);
      (s == 0 ? rep.boosted[i].plus : rep.boosted[i].minus) = tr;
    }
    rep.boosted[i].intersection = intersect(rep.boosted[i].plus, rep.boosted[i].minus);
  }

  rep.delta_lab = distance(rep.lab[0].intersection, rep.lab[1].intersection);
  rep.delta_emp = distance(rep.boosted[0].intersection, rep.boosted[1].intersection);
  rep.delta_pred = distance(rep.predicted[0], rep.predicted[1]);
  rep.relative_error =
      rep.delta_pred > 0.0 ? std::abs(rep.delta_emp - rep.delta_pred) / rep.delta_pred : 0.0;
  double noise = 0.5;
  for (int i = 0; i < 2; ++i) {
    noise = std::max({noise, pair_noise(rep.lab[i]), pair_noise(rep.boosted[i])});
  }
  rep.noise = noise;
  return rep;
}

}  // namespace qcadsr
