#include "qcadsr/experiments.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <sstream>

#include "qcadsr/csv.hpp"
#include "qcadsr/errors.hpp"
#include "qcadsr/kinematics.hpp"
#include "qcadsr/qca_engine.hpp"
#include "qcadsr/wavepackets.hpp"

namespace qcadsr {

namespace fs = std::filesystem;

namespace {

const std::vector<double> kFigureMasses = {0.1, 0.2, 0.4, 0.8, 1.0};

MassParam checked_mass(double m) {
  if (!(m >= 0.0 && m <= 1.0)) {
    throw ValidationError("mass must lie in [0, 1], got " + format_double(m));
  }
  return MassParam::make(m);
}

Boost checked_boost(double b) {
  if (!(std::abs(b) < 1.0)) {
    throw ValidationError("beta must satisfy |beta| < 1, got " + format_double(b));
  }
  return Boost::make(b);
}

double checked_k(double k, const std::string& key) {
  if (!(k >= -kPi && k <= kPi)) {
    throw ValidationError(key + " must lie in [-pi, pi], got " + format_double(k));
  }
  return k;
}

std::size_t checked_cells(const Config& cfg, std::int64_t fallback) {
  std::int64_t n = cfg.get_int("cells", fallback);
  if (n < 4 || n % 2 != 0 || n > (std::int64_t{1} << 26)) {
    throw ValidationError("cells must be even and in [4, 2^26], got " + std::to_string(n));
  }
  return static_cast<std::size_t>(n);
}

double checked_sigma(const Config& cfg, double fallback) {
  double s = cfg.get_double("sigma_k", fallback);
  if (!(s > 0.0 && s < 0.5)) throw ValidationError("sigma_k must lie in (0, 0.5), got " + format_double(s));
  return s;
}

std::int64_t checked_steps(const Config& cfg, std::int64_t fallback) {
  std::int64_t t = cfg.get_int("steps", fallback);
  if (t < 0) throw ValidationError("steps must be >= 0, got " + std::to_string(t));
  return t;
}

std::string tag_number(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.6g", v);
  return buf;
}

void echo_config(KeyValueReport& rep, const Config& cfg) {
  rep.comment("configuration");
  for (const auto& [k, v] : cfg.entries()) rep.add("config." + k, v);
}

void emit(RunResult& res, const fs::path& path, const std::string& content) {
  write_file_atomic(path, content);
  res.files.push_back(path);
}

double sum(const std::vector<double>& v) {
  double s = 0.0;
  for (double x : v) s += x;
  return s;
}

SpectralAmplitude normalized(const SpectralAmplitude& amp) {
  double n = amp.norm();
  if (!(n > 0.0)) throw NumericalError("positive-branch weight is zero; nothing to boost");
  std::vector<cplx> f = amp.coefficients();
  for (auto& v : f) v /= std::sqrt(n);
  return SpectralAmplitude::from_coefficients(std::move(f), amp.mass());
}

void report_width(KeyValueReport& rep, const std::string& key, const SpectralAmplitude& amp) {
  try {
    PacketWidth w = packet_width(amp);
    rep.add(key + ".width_cells", w.cells);
    rep.add(key + ".width_k", w.k);
  } catch (const MultiPeakError&) {
    rep.add(key + ".width_cells", "multimodal");
  }
}

// Shared by boost-localized and boost-packet.
void emit_boost(RunResult& res, KeyValueReport& rep, const fs::path& out, const std::string& stem,
                const LatticeState& input, const SpectralAmplitude& lab, const Boost& boost) {
  BoostOutcome bo = boost_state(lab, boost);
  const SpectralAmplitude& boosted = bo.amplitude;
  std::vector<double> d_in = position_density(input);
  std::vector<double> d_lab = position_density(lab.embedded());
  std::vector<double> d_b = position_density(boosted.embedded());

  CsvTable t({"x", "input", "lab", "boosted"});
  for (std::size_t x = 0; x < d_in.size(); ++x) {
    t.add_row({std::to_string(x), format_double(d_in[x]), format_double(d_lab[x]),
               format_double(d_b[x])});
  }
  emit(res, out / (stem + "_density.csv"), t.str());
  emit(res, out / (stem + "_lab_spectral.csv"), spectral_csv(lab));
  emit(res, out / (stem + "_boosted_spectral.csv"), spectral_csv(boosted));
  emit(res, out / (stem + "_boosted_state.csv"), state_csv(boosted.embedded()));

  rep.add(stem + ".norm_input", sum(d_in));
  rep.add(stem + ".norm_lab", lab.norm());
  rep.add(stem + ".norm_boosted", boosted.norm());
  rep.add(stem + ".norm_change", std::abs(boosted.norm() - lab.norm()));
  rep.add(stem + ".weight_near_fixed_point", bo.weight_near_fixed_point);
  rep.add(stem + ".near_fixed_point_warning", bo.near_fixed_point_warning ? "yes" : "no");
  report_width(rep, stem + ".lab", lab);
  report_width(rep, stem + ".boosted", boosted);
}

}  // namespace

std::string run_tag(double m, double beta) {
  return "m" + tag_number(m) + "_beta" + tag_number(beta);
}

RunResult run_dispersion_sweep(const Config& cfg, const fs::path& out) {
  cfg.require_known({"mass", "k_samples", "out", "seed"});
  std::vector<double> masses = cfg.get_doubles("mass", kFigureMasses);
  std::int64_t ns = cfg.get_int("k_samples", 1025);
  if (ns < 3) throw ValidationError("k_samples must be >= 3");
  RunResult res;
  CsvTable t({"m", "k", "omega", "v"});
  KeyValueReport rep;
  echo_config(rep, cfg);
  for (double m : masses) {
    MassParam mass = checked_mass(m);
    double vmax = -1.0, kmax = 0.0;
    for (std::int64_t i = 0; i < ns; ++i) {
      double k = -kPi + 2.0 * kPi * static_cast<double>(i) / static_cast<double>(ns - 1);
      if (i == ns - 1) k = kPi;
      OnShellPoint p = dispersion(k, mass);
      double v = group_velocity(k, mass);
      t.add_row({format_double(m), format_double(k), format_double(p.omega), format_double(v)});
      if (v > vmax) {
        vmax = v;
        kmax = k;
      }
    }
    std::string key = "m" + tag_number(m);
    rep.add(key + ".omega_at_0", dispersion(0.0, mass).omega);
    rep.add(key + ".v_max", vmax);
    rep.add(key + ".k_at_v_max", kmax);
  }
  emit(res, out / "dispersion.csv", t.str());
  emit(res, out / "dispersion_summary.txt", rep.str());
  res.summary = "dispersion: " + std::to_string(masses.size()) + " masses x " +
                std::to_string(ns) + " wave-vectors";
  return res;
}

RunResult run_boost_point(const Config& cfg, const fs::path& out) {
  cfg.require_known({"mass", "beta", "k0", "k_samples", "out", "seed"});
  std::vector<double> masses = cfg.get_doubles("mass", {0.1});
  std::vector<double> betas = cfg.get_doubles("beta", {-0.5});
  std::vector<double> ks;
  if (cfg.has("k0")) {
    ks = cfg.get_doubles("k0", {});
  } else {
    std::int64_t ns = cfg.get_int("k_samples", 257);
    if (ns < 2) throw ValidationError("k_samples must be >= 2");
    for (std::int64_t i = 0; i < ns; ++i) {
      ks.push_back(-kPi + 2.0 * kPi * static_cast<double>(i) / static_cast<double>(ns - 1));
    }
    ks.back() = kPi;
  }
  for (double k : ks) checked_k(k, "k0");
  RunResult res;
  CsvTable t({"m", "beta", "k", "omega", "region", "E", "p", "k_boosted", "omega_boosted", "v",
              "v_boosted", "measure_ratio", "shell_residual"});
  std::size_t rows = 0;
  double worst = 0.0;
  for (double m : masses) {
    MassParam mass = checked_mass(m);
    for (double b : betas) {
      Boost boost = checked_boost(b);
      for (double k : ks) {
        OnShellPoint p = dispersion(k, mass);
        OnShellPoint q = deformed_boost(p, boost);
        double E = std::nan(""), pp = std::nan("");
        if (!is_fixed_point(k)) {
          PseudoEnergyMomentum ep = dmap(p);
          E = ep.E;
          pp = ep.p;
        }
        double cq = std::cos(q.omega), ck = std::cos(q.k);
        double resid = std::abs(cq * cq - mass.n() * mass.n() * ck * ck);
        worst = std::max(worst, resid);
        t.add_row({format_double(m), format_double(b), format_double(k), format_double(p.omega),
                   to_string(p.region), format_double(E), format_double(pp), format_double(q.k),
                   format_double(q.omega), format_double(group_velocity(k, mass)),
                   format_double(group_velocity(q.k, mass)),
                   format_double(measure_ratio(k, q.k, boost, mass)), format_double(resid)});
        ++rows;
      }
    }
  }
  emit(res, out / "boost_point.csv", t.str());
  res.summary = "boost-point: " + std::to_string(rows) + " rows, max shell residual " +
                format_double(worst);
  return res;
}

namespace {

Spinor internal_from(const Config& cfg) {
  std::vector<double> v = cfg.get_doubles("internal", {1.0, 0.0});
  Spinor s;
  if (v.size() == 2) {
    s = {cplx(v[0], 0.0), cplx(v[1], 0.0)};
  } else if (v.size() == 4) {
    s = {cplx(v[0], v[1]), cplx(v[2], v[3])};
  } else {
    throw ValidationError("internal must list 2 real or 4 (re, im) components");
  }
  double n = std::norm(s[0]) + std::norm(s[1]);
  if (std::abs(n - 1.0) > 1e-12) {
    throw ValidationError("internal state must have unit norm, got |internal|^2 = " + format_double(n));
  }
  return s;
}

std::size_t cell_index(double x, std::size_t n) {
  if (x != std::floor(x)) throw ValidationError("x0 must be an integer cell for a localized state");
  long long s = signed_cell(static_cast<long long>(x), n);
  return static_cast<std::size_t>(s < 0 ? s + static_cast<long long>(n) : s);
}

}  // namespace

RunResult run_boost_localized(const Config& cfg, const fs::path& out) {
  cfg.require_known({"mass", "beta", "cells", "x0", "internal", "out", "seed"});
  std::vector<double> masses = cfg.get_doubles("mass", {0.1, 0.3, 0.8});
  std::vector<double> betas = cfg.get_doubles("beta", {-0.99, 0.4, 0.8, 0.99});
  const std::size_t n = checked_cells(cfg, 4096);
  const double x0 = cfg.get_double("x0", 0.0);
  const Spinor internal = internal_from(cfg);
  RunResult res;
  KeyValueReport rep;
  echo_config(rep, cfg);
  const LatticeState input = localized_state(cell_index(x0, n), internal, n);
  for (double m : masses) {
    MassParam mass = checked_mass(m);
    BranchProjection proj = project_positive_branch(input, mass);
    SpectralAmplitude lab = normalized(proj.amplitude);
    for (double b : betas) {
      Boost boost = checked_boost(b);
      std::string stem = "localized_" + run_tag(m, b);
      rep.add(stem + ".positive_weight", proj.positive_weight);
      rep.add(stem + ".negative_weight", proj.negative_weight);
      emit_boost(res, rep, out, stem, input, lab, boost);
    }
  }
  emit(res, out / "boost_localized_summary.txt", rep.str());
  res.summary = "boost-localized: " + std::to_string(masses.size() * betas.size()) + " runs";
  return res;
}

RunResult run_boost_packet(const Config& cfg, const fs::path& out) {
  cfg.require_known({"mass", "beta", "cells", "k0", "sigma_k", "x0", "out", "seed"});
  std::vector<double> masses = cfg.get_doubles("mass", {0.1});
  std::vector<double> betas = cfg.get_doubles("beta", {-0.99});
  std::vector<double> k0s = cfg.get_doubles("k0", {0.3});
  const std::size_t n = checked_cells(cfg, 4096);
  const double sigma = checked_sigma(cfg, 0.02);
  const double x0 = cfg.get_double("x0", 0.0);
  RunResult res;
  KeyValueReport rep;
  echo_config(rep, cfg);
  for (double m : masses) {
    MassParam mass = checked_mass(m);
    for (double k0 : k0s) {
      checked_k(k0, "k0");
      SpectralAmplitude lab = make_packet({k0, sigma, x0, mass}, n);
      for (double b : betas) {
        Boost boost = checked_boost(b);
        std::string stem = "packet_" + run_tag(m, b) + "_k" + tag_number(k0);
        OnShellPoint q = deformed_boost(dispersion(k0, mass), boost);
        rep.add(stem + ".k0_boosted", q.k);
        rep.add(stem + ".v_lab", group_velocity(k0, mass));
        rep.add(stem + ".v_boosted", group_velocity(q.k, mass));
        emit_boost(res, rep, out, stem, lab.embedded(), lab, boost);
      }
    }
  }
  emit(res, out / "boost_packet_summary.txt", rep.str());
  res.summary = "boost-packet: " + std::to_string(masses.size() * betas.size() * k0s.size()) + " runs";
  return res;
}

RunResult run_relative_locality(const Config& cfg, const fs::path& out) {
  cfg.require_known({"mass", "beta", "cells", "k1", "k2", "sigma_k", "event_t", "event_x", "samples",
                     "time_span", "out", "seed"});
  RelativeLocalityParams p;
  p.mass = cfg.get_double("mass", p.mass);
  checked_mass(p.mass);
  p.beta = cfg.get_double("beta", p.beta);
  checked_boost(p.beta);
  p.n_cells = checked_cells(cfg, static_cast<std::int64_t>(p.n_cells));
  p.k1 = checked_k(cfg.get_double("k1", p.k1), "k1");
  p.k2 = checked_k(cfg.get_double("k2", p.k2), "k2");
  p.sigma_k = checked_sigma(cfg, p.sigma_k);
  p.event.t = cfg.get_double("event_t", p.event.t);
  p.event.x = cfg.get_double("event_x", p.event.x);
  std::int64_t samples = cfg.get_int("samples", p.samples);
  if (samples < 2 || samples > 10000) throw ValidationError("samples must lie in [2, 10000]");
  p.samples = static_cast<int>(samples);
  p.time_span = cfg.get_double("time_span", p.time_span);
  if (!(p.time_span > 0.0)) throw ValidationError("time_span must be > 0");
  if (p.mass == 0.0) throw ValidationError("relative-locality needs mass > 0 (packets near k = 0)");
  for (double k : {p.k1, p.k2}) {
    if (!(std::abs(k) > 0.0)) throw ValidationError("k1 and k2 must be nonzero (pairs are +k, -k)");
  }

  RelativeLocalityReport r = relative_locality_experiment(p);

  RunResult res;
  KeyValueReport rep;
  echo_config(rep, cfg);
  rep.comment("parameters");
  rep.add("mass", p.mass);
  rep.add("beta", p.beta);
  rep.add("cells", static_cast<double>(p.n_cells));
  rep.add("k1", p.k1);
  rep.add("k2", p.k2);
  rep.add("sigma_k", p.sigma_k);
  rep.add("event_t", p.event.t);
  rep.add("event_x", p.event.x);
  rep.add("samples", static_cast<double>(p.samples));
  rep.add("time_span", p.time_span);
  CsvTable t({"t", "x_fit_pair1", "x_fit_pair2", "frame", "member"});
  for (int frame = 0; frame < 2; ++frame) {
    const PairResult* pr = frame == 0 ? r.lab : r.boosted;
    const char* fname = frame == 0 ? "lab" : "boosted";
    for (int i = 0; i < 2; ++i) {
      std::string key = std::string(fname) + ".pair" + std::to_string(i + 1);
      rep.add(key + ".v_plus", pr[i].plus.v);
      rep.add(key + ".v_minus", pr[i].minus.v);
      rep.add(key + ".residual_plus", pr[i].plus.residual_rms);
      rep.add(key + ".residual_minus", pr[i].minus.residual_rms);
      rep.add(key + ".event_t", pr[i].intersection.t);
      rep.add(key + ".event_x", pr[i].intersection.x);
    }
    for (int s = 0; s < 2; ++s) {
      const Trajectory& a = s == 0 ? pr[0].plus : pr[0].minus;
      const Trajectory& b = s == 0 ? pr[1].plus : pr[1].minus;
      for (std::size_t i = 0; i < a.t.size(); ++i) {
        t.add_row({format_double(a.t[i]), format_double(a.x[i]), format_double(b.x[i]), fname,
                   s == 0 ? "plus" : "minus"});
      }
    }
  }
  for (int i = 0; i < 2; ++i) {
    std::string key = "predicted.pair" + std::to_string(i + 1);
    rep.add(key + ".event_t", r.predicted[i].t);
    rep.add(key + ".event_x", r.predicted[i].x);
  }
  rep.comment("results");
  rep.add("delta_lab", r.delta_lab);
  rep.add("delta_emp", r.delta_emp);
  rep.add("delta_pred", r.delta_pred);
  rep.add("delta_difference", r.delta_emp - r.delta_pred);
  rep.add("relative_error", r.relative_error);
  rep.add("fit_noise", r.noise);
  rep.add("min_boosted_norm", r.positive_weight_min);
  emit(res, out / "relative_locality.txt", rep.str());
  emit(res, out / "relative_locality_trajectories.csv", t.str());
  res.summary = "relative-locality: delta_emp " + format_double(r.delta_emp) + ", delta_pred " +
                format_double(r.delta_pred) + ", noise " + format_double(r.noise);
  return res;
}

RunResult run_evolve(const Config& cfg, const fs::path& out) {
  cfg.require_known({"mass", "cells", "steps", "k0", "sigma_k", "x0", "initial", "input",
                     "internal", "method", "samples", "out", "seed"});
  const double m = cfg.get_double("mass", 0.1);
  const MassParam mass = checked_mass(m);
  const std::int64_t steps = checked_steps(cfg, 500);
  const std::string initial = cfg.get_string("initial", cfg.has("input") ? "file" : "packet");
  const std::string method = cfg.get_string("method", "spectral");
  if (method != "spectral" && method != "direct" && method != "both") {
    throw ValidationError("method must be spectral, direct or both, got '" + method + "'");
  }
  std::int64_t samples = cfg.get_int("samples", 11);
  if (samples < 1 || samples > 100000) throw ValidationError("samples must lie in [1, 100000]");

  LatticeState state;
  if (initial == "packet") {
    const std::size_t n = checked_cells(cfg, 4096);
    double k0 = checked_k(cfg.get_double("k0", 0.3), "k0");
    state = make_packet({k0, checked_sigma(cfg, 0.02), cfg.get_double("x0", 0.0), mass}, n).embedded();
  } else if (initial == "localized") {
    const std::size_t n = checked_cells(cfg, 4096);
    state = localized_state(cell_index(cfg.get_double("x0", 0.0), n), internal_from(cfg), n);
  } else if (initial == "file") {
    if (!cfg.has("input")) throw ValidationError("initial = file needs input = <state csv>");
    state = parse_state_csv(read_file(cfg.get_string("input", "")));
    require_lattice_size(state.size());
  } else {
    throw ValidationError("initial must be packet, localized or file, got '" + initial + "'");
  }

  RunResult res;
  KeyValueReport rep;
  echo_config(rep, cfg);
  CsvTable track({"t", "norm", "peak_x", "width"});
  const LatticeState start = state;
  LatticeState direct = state;
  std::int64_t direct_t = 0;
  for (std::int64_t i = 0; i < samples; ++i) {
    std::int64_t t = samples == 1 ? steps : (steps * i) / (samples - 1);
    LatticeState s;
    if (method == "direct") {
      direct = evolve_direct(direct, mass, t - direct_t);
      direct_t = t;
      s = direct;
    } else {
      s = evolve_spectral(start, mass, t);
    }
    std::vector<double> d = position_density(s);
    std::string peak = "nan", width = "nan";
    try {
      peak = format_double(locate_peak(d));
      width = format_double(density_width(d));
    } catch (const MultiPeakError&) {
    }
    track.add_row({std::to_string(t), format_double(sum(d)), peak, width});
    if (i == samples - 1) state = s;
  }
  if (method == "both") {
    LatticeState d = evolve_direct(start, mass, steps);
    double dev = 0.0;
    for (std::size_t x = 0; x < d.size(); ++x) {
      dev = std::max({dev, std::abs(d.r[x] - state.r[x]), std::abs(d.l[x] - state.l[x])});
    }
    rep.add("max_direct_spectral_deviation", dev);
  }
  rep.add("initial_norm", start.norm());
  rep.add("final_norm", state.norm());
  emit(res, out / "evolve_state.csv", state_csv(state));
  emit(res, out / "evolve_track.csv", track.str());
  emit(res, out / "evolve_summary.txt", rep.str());
  res.summary = "evolve: " + std::to_string(steps) + " steps, final norm " + format_double(state.norm());
  return res;
}

}  // namespace qcadsr
