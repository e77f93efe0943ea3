#pragma once

// Gaussian packets, trajectory extraction from evolved densities, the
// first-order space-time image of a deformed boost, and the two-pair
// coincidence experiment.

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "qcadsr/kinematics.hpp"
#include "qcadsr/qca_engine.hpp"

namespace qcadsr {

struct GaussianPacket {
  double k0 = 0.0;
  double sigma_k = 0.02;
  /// Centre at t = 0 in cells; may be negative (taken modulo N).
  double x0 = 0.0;
  MassParam mass = MassParam::make(0.0);
};

/// g(k) proportional to exp(-(k-k0)^2 / (4 sigma_k^2)) exp(-i k x0), unit norm
/// in the invariant measure. Throws SupportError if [k0 - 5 sigma, k0 + 5 sigma]
/// reaches +-pi/2 (or, at m = 0, the divergences of mu at 0 and +-pi).
SpectralAmplitude make_packet(const GaussianPacket& spec, std::size_t n_cells);

/// Sub-cell argmax of a density by three-point quadratic interpolation, in
/// [0, N). Throws MultiPeakError unless the cells above half maximum form one
/// contiguous run.
double locate_peak(std::span<const double> density);

/// RMS width around the peak, distances taken on the ring.
double density_width(std::span<const double> density);

struct PacketWidth {
  double cells = 0.0;
  double k = 0.0;
};

/// Position width of the embedded state and RMS width of |f(k)|^2.
PacketWidth packet_width(const SpectralAmplitude& amp);

struct Trajectory {
  double x_ref = 0.0;
  double v = 0.0;
  double residual_rms = 0.0;
  std::vector<double> t;
  /// Fitted peak positions, unwrapped, in signed cells.
  std::vector<double> x;
  double at(double time) const { return x_ref + v * time; }
};

/// Evolves the embedded state to each time (negative times evolve backwards),
/// locates the peak, and fits x(t) = x_ref + v t by least squares. Peaks are
/// reported in [-N/2, N/2) and unwrapped by continuity. Throws WrapAroundError
/// if a peak comes within 5 widths of the seam at +-N/2.
Trajectory fit_trajectory(const SpectralAmplitude& amp, std::span<const std::int64_t> t_samples);

struct Event {
  double t = 0.0;
  double x = 0.0;
};

/// Throws ParallelTrajectoriesError if |v_a - v_b| < 1e-9.
Event intersect(const Trajectory& a, const Trajectory& b);

/// Linear map (t, x) -> (t', x') = (tt t + tx x, xt t + xx x).
struct SpacetimeBoostMatrix {
  double tt = 1.0, tx = 0.0, xt = 0.0, xx = 1.0;
  Event apply(const Event& e) const { return {tt * e.t + tx * e.x, xt * e.t + xx * e.x}; }
};

/// Partial derivatives of the inverse deformed boost (omega, k)(omega', k') at
/// the image of (omega(k0), k0):
///   t' = d_omega' omega t - d_omega' k x
///   x' = -d_k' omega t + d_k' k x
/// Reduces to [[gamma, -gamma beta], [-gamma beta, gamma]] for k0, m -> 0.
/// Throws NearSingularError within 1e-3 of +-pi/2 or where cos omega = 0.
SpacetimeBoostMatrix spacetime_boost_matrix(double k0, const Boost& boost, const MassParam& mass);

Event boost_event(const Event& event, double k0, const Boost& boost, const MassParam& mass);

struct RelativeLocalityParams {
  double k1 = 0.05;
  double k2 = kPi / 5.0;
  double beta = -0.5;
  double mass = 0.1;
  std::size_t n_cells = std::size_t{1} << 14;
  double sigma_k = 0.005;
  /// Lab-frame event through which all four trajectories pass. Packets are
  /// prepared at t = 0.
  Event event{0.0, -2000.0};
  /// Samples per trajectory, spread over [tc - span, tc + span].
  int samples = 9;
  double time_span = 1000.0;
};

struct PairResult {
  double k = 0.0;
  Trajectory plus;
  Trajectory minus;
  Event intersection;
};

struct RelativeLocalityReport {
  RelativeLocalityParams params;
  PairResult lab[2];
  PairResult boosted[2];
  /// Intersection of the first-order images of both member lines.
  Event predicted[2];
  /// M(k_i) E for the positive members.
  Event image[2];
  double delta_lab = 0.0;
  double delta_emp = 0.0;
  double delta_pred = 0.0;
  double relative_error = 0.0;
  double noise = 0.0;
  double positive_weight_min = 1.0;
};

/// Two pairs of packets {+k1, -k1} and {+k2, -k2} are aimed at one lab event.
/// Each packet is boosted through boost_state, refitted, and the pair
/// intersections compared with the first-order prediction: the boosted line of
/// a member with wave-vector k passes through M(k) E with slope v(k').
/// Separations are Euclidean in (t, x).
RelativeLocalityReport relative_locality_experiment(const RelativeLocalityParams& params);

}  // namespace qcadsr
