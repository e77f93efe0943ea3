#include "qcadsr/property_suite.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <functional>
#include <random>

#include "qcadsr/csv.hpp"
#include "qcadsr/errors.hpp"
#include "qcadsr/kinematics.hpp"
#include "qcadsr/qca_engine.hpp"
#include "qcadsr/wavepackets.hpp"

namespace qcadsr {

namespace {

using Rng = std::mt19937_64;

double uniform(Rng& rng, double a, double b) { return std::uniform_real_distribution<double>(a, b)(rng); }

// k in B1 or B2 at least `gap` away from +-pi/2.
double sample_k(Rng& rng, bool b2, double gap) {
  double u = uniform(rng, 0.0, kHalfPi - gap);
  double s = uniform(rng, 0.0, 1.0) < 0.5 ? -1.0 : 1.0;
  return b2 ? s * (kPi - u) : s * u;
}

double shell_residual(const OnShellPoint& p, const MassParam& mass) {
  double cw = std::cos(p.omega), ck = std::cos(p.k);
  return std::abs(cw * cw - mass.n() * mass.n() * ck * ck);
}

double point_distance(const OnShellPoint& a, const OnShellPoint& b) {
  return std::max(std::abs(a.omega - b.omega), std::abs(a.k - b.k));
}

struct Spec {
  const char* name;
  std::size_t samples;
  double tolerance;
  std::function<double(Rng&)> residual;
};

LatticeState random_state(Rng& rng, std::size_t n) {
  LatticeState s = LatticeState::zeros(n);
  std::normal_distribution<double> g;
  for (std::size_t x = 0; x < n; ++x) {
    s.r[x] = {g(rng), g(rng)};
    s.l[x] = {g(rng), g(rng)};
  }
  double nrm = std::sqrt(s.norm());
  for (std::size_t x = 0; x < n; ++x) {
    s.r[x] /= nrm;
    s.l[x] /= nrm;
  }
  return s;
}

double l2_distance(const SpectralAmplitude& a, const SpectralAmplitude& b) {
  double s = 0.0;
  for (std::size_t j = 0; j < a.size(); ++j) s += std::norm(a.coefficients()[j] - b.coefficients()[j]);
  return std::sqrt(s * a.dk());
}

// Packet centre kept 5 sigma clear of the fixed points and, after boosts, of
// the region edges.
double sample_packet_k(Rng& rng, double sigma) {
  return uniform(rng, 0.05 + 5.0 * sigma, 1.0);
}

std::vector<Spec> make_specs() {
  std::vector<Spec> s;
  s.push_back({"dispersion_invariance", 100000, 1e-12, [](Rng& rng) {
                 MassParam mass = MassParam::make(uniform(rng, 0.0, 1.0));
                 Boost b = Boost::make(uniform(rng, -0.999, 0.999));
                 OnShellPoint p = dispersion(uniform(rng, -kPi, kPi), mass);
                 return shell_residual(deformed_boost(p, b), mass);
               }});
  s.push_back({"closed_form_vs_composition", 100000, 1e-12, [](Rng& rng) {
                 MassParam mass = MassParam::make(uniform(rng, 0.0, 1.0));
                 Boost b = Boost::make(uniform(rng, -0.999, 0.999));
                 OnShellPoint p = dispersion(sample_k(rng, false, 1e-3), mass);
                 OnShellPoint q = deformed_boost(p, b);
                 FrequencyWaveVector c = deformed_boost_map(p.omega, p.k, p.region, b);
                 return std::max(std::abs(q.omega - c.omega), std::abs(q.k - c.k));
               }});
  s.push_back({"fixed_points", 1000, 0.0, [](Rng& rng) {
                 MassParam mass = MassParam::make(uniform(rng, 0.0, 1.0));
                 Boost b = Boost::make(uniform(rng, -0.999, 0.999));
                 double r = 0.0;
                 for (double k : {kHalfPi, -kHalfPi}) {
                   OnShellPoint p = dispersion(k, mass);
                   OnShellPoint q = deformed_boost(p, b);
                   r = std::max({r, std::abs(q.k - k), std::abs(q.omega - kHalfPi),
                                 std::abs(p.omega - kHalfPi)});
                 }
                 return r;
               }});
  s.push_back({"lorentz_limit", 10000, 1e-6, [](Rng& rng) {
                 MassParam mass = MassParam::make(uniform(rng, 0.0, 1e-3));
                 Boost b = Boost::make(uniform(rng, -0.9, 0.9));
                 OnShellPoint p = dispersion(uniform(rng, -1e-3, 1e-3), mass);
                 OnShellPoint q = deformed_boost(p, b);
                 FrequencyWaveVector l = standard_boost(p.omega, p.k, b);
                 return std::max(std::abs(q.omega - l.omega), std::abs(q.k - l.k));
               }});
  s.push_back({"dmap_jacobian_at_origin", 1, 1e-10, [](Rng&) {
                 const double h = 1e-6;
                 PseudoEnergyMomentum wp = dmap(h, 0.0), wm = dmap(-h, 0.0);
                 PseudoEnergyMomentum kp = dmap(0.0, h), km = dmap(0.0, -h);
                 double j00 = (wp.E - wm.E) / (2 * h), j10 = (wp.p - wm.p) / (2 * h);
                 double j01 = (kp.E - km.E) / (2 * h), j11 = (kp.p - km.p) / (2 * h);
                 return std::max({std::abs(j00 - 1.0), std::abs(j01), std::abs(j10), std::abs(j11 - 1.0)});
               }});
  s.push_back({"group_law", 10000, 1e-10, [](Rng& rng) {
                 MassParam mass = MassParam::make(uniform(rng, 0.0, 1.0));
                 Boost b1 = Boost::make(uniform(rng, -0.9, 0.9));
                 Boost b2 = Boost::make(uniform(rng, -0.9, 0.9));
                 OnShellPoint p = dispersion(uniform(rng, -kPi, kPi), mass);
                 OnShellPoint two = deformed_boost(deformed_boost(p, b1), b2);
                 OnShellPoint one = deformed_boost(p, velocity_composition(b1, b2));
                 return point_distance(two, one);
               }});
  s.push_back({"boost_inverse", 10000, 1e-10, [](Rng& rng) {
                 MassParam mass = MassParam::make(uniform(rng, 0.0, 1.0));
                 Boost b = Boost::make(uniform(rng, -0.9, 0.9));
                 OnShellPoint p = dispersion(uniform(rng, -kPi, kPi), mass);
                 return point_distance(deformed_boost(deformed_boost(p, b), b.inverse()), p);
               }});
  s.push_back({"measure_invariance", 10000, 1e-8, [](Rng& rng) {
                 MassParam mass = MassParam::make(uniform(rng, 0.05, 1.0));
                 Boost b = Boost::make(uniform(rng, -0.9, 0.9));
                 bool b2 = uniform(rng, 0.0, 1.0) < 0.5;
                 double k = sample_k(rng, b2, 0.05);
                 if (std::abs(k) < 1e-2 || std::abs(k) > kPi - 1e-2) k = b2 ? 3.0 : 0.5;
                 Region reg = region_of(k);
                 const double h = 1e-6;
                 OnShellPoint q = deformed_boost(dispersion(k, mass), b);
                 OnShellPoint qp = deformed_boost({dispersion(k + h, mass).omega, k + h, reg}, b);
                 OnShellPoint qm = deformed_boost({dispersion(k - h, mass).omega, k - h, reg}, b);
                 double jac = std::abs(qp.k - qm.k) / (2 * h);
                 double ratio = invariant_measure(k, mass) / invariant_measure(q.k, mass);
                 return std::abs(ratio - jac) / jac;
               }});
  s.push_back({"dmap_round_trip", 20000, 1e-12, [](Rng& rng) {
                 MassParam mass = MassParam::make(uniform(rng, 0.0, 1.0));
                 bool b2 = uniform(rng, 0.0, 1.0) < 0.5;
                 OnShellPoint p = dispersion(sample_k(rng, b2, 1e-3), mass);
                 OnShellPoint q = dmap_inverse(dmap(p), p.region);
                 return q.region == p.region ? point_distance(p, q) : 1.0;
               }});
  s.push_back({"eigensystem_unitarity", 1000, 1e-14, [](Rng& rng) {
                 MassParam mass = MassParam::make(uniform(rng, 0.0, 1.0));
                 UnitaryAtK u = eigensystem(uniform(rng, -kPi, kPi), mass);
                 double r = 0.0;
                 for (int i = 0; i < 2; ++i) {
                   for (int j = 0; j < 2; ++j) {
                     cplx s = 0.0;
                     for (int c = 0; c < 2; ++c) s += u.matrix[i][c] * std::conj(u.matrix[j][c]);
                     r = std::max(r, std::abs(s - (i == j ? 1.0 : 0.0)));
                   }
                 }
                 return r;
               }});
  s.push_back({"eigenphase_vs_dispersion", 1000, 1e-12, [](Rng& rng) {
                 MassParam mass = MassParam::make(uniform(rng, 0.0, 1.0));
                 double k = uniform(rng, -kPi, kPi);
                 UnitaryAtK u = eigensystem(k, mass);
                 double omega = dispersion(k, mass).omega;
                 double r = 0.0;
                 for (int branch = 0; branch < 2; ++branch) {
                   const auto& e = branch == 0 ? u.e_plus : u.e_minus;
                   cplx lam = std::polar(1.0, branch == 0 ? -omega : omega);
                   for (int i = 0; i < 2; ++i) {
                     cplx ue = u.matrix[i][0] * e[0] + u.matrix[i][1] * e[1];
                     r = std::max(r, std::abs(ue - lam * e[i]));
                   }
                 }
                 return r;
               }});
  s.push_back({"direct_vs_spectral", 10, 1e-10, [](Rng& rng) {
                 MassParam mass = MassParam::make(uniform(rng, 0.0, 1.0));
                 LatticeState s0 = random_state(rng, 256);
                 LatticeState a = evolve_direct(s0, mass, 100);
                 LatticeState b = evolve_spectral(s0, mass, 100);
                 double r = 0.0;
                 for (std::size_t x = 0; x < a.size(); ++x) {
                   r = std::max({r, std::abs(a.r[x] - b.r[x]), std::abs(a.l[x] - b.l[x])});
                 }
                 return r;
               }});
  s.push_back({"norm_drift_per_step", 4, 1e-12, [](Rng& rng) {
                 MassParam mass = MassParam::make(uniform(rng, 0.0, 1.0));
                 LatticeState st = random_state(rng, 256);
                 double r = 0.0, prev = st.norm();
                 for (int t = 0; t < 1000; ++t) {
                   st = step_direct(st, mass);
                   double now = st.norm();
                   r = std::max(r, std::abs(now - prev));
                   prev = now;
                 }
                 LatticeState sp = evolve_spectral(random_state(rng, 256), mass, 10000);
                 return std::max(r, std::abs(sp.norm() - 1.0));
               }});
  s.push_back({"state_boost_unitarity", 6, 1e-8, [](Rng& rng) {
                 MassParam mass = MassParam::make(0.1);
                 double sigma = uniform(rng, 0.01, 0.03);
                 double k0 = sample_packet_k(rng, sigma) * (uniform(rng, 0.0, 1.0) < 0.5 ? -1.0 : 1.0);
                 SpectralAmplitude a = make_packet({k0, sigma, uniform(rng, -200.0, 200.0), mass}, 4096);
                 BoostOutcome bo = boost_state(a, Boost::make(-0.99));
                 return std::abs(bo.amplitude.norm() - a.norm());
               }});
  s.push_back({"state_boost_composition", 3, 1e-6, [](Rng& rng) {
                 MassParam mass = MassParam::make(uniform(rng, 0.05, 0.5));
                 double sigma = 0.02;
                 double k0 = uniform(rng, 0.2, 0.8);
                 Boost b1 = Boost::make(uniform(rng, -0.5, 0.5));
                 Boost b2 = Boost::make(uniform(rng, -0.5, 0.5));
                 SpectralAmplitude a = make_packet({k0, sigma, 0.0, mass}, 4096);
                 SpectralAmplitude two = boost_state(boost_state(a, b1).amplitude, b2).amplitude;
                 SpectralAmplitude one = boost_state(a, velocity_composition(b1, b2)).amplitude;
                 return l2_distance(two, one);
               }});
  s.push_back({"spacetime_matrix_vs_fd", 1000, 1e-7, [](Rng& rng) {
                 MassParam mass = MassParam::make(uniform(rng, 0.0, 0.95));
                 Boost b = Boost::make(uniform(rng, -0.9, 0.9));
                 bool b2 = uniform(rng, 0.0, 1.0) < 0.5;
                 double k0 = sample_k(rng, b2, 0.05);
                 SpacetimeBoostMatrix m = spacetime_boost_matrix(k0, b, mass);
                 OnShellPoint q = deformed_boost(dispersion(k0, mass), b);
                 Boost back = b.inverse();
                 const double h = 1e-6;
                 auto f = [&](double w, double k) { return deformed_boost_map(w, k, q.region, back); };
                 FrequencyWaveVector wp = f(q.omega + h, q.k), wm = f(q.omega - h, q.k);
                 FrequencyWaveVector kp = f(q.omega, q.k + h), km = f(q.omega, q.k - h);
                 double c = (wp.omega - wm.omega) / (2 * h), a = (wp.k - wm.k) / (2 * h);
                 double d = (kp.omega - km.omega) / (2 * h), bb = (kp.k - km.k) / (2 * h);
                 return std::max({std::abs(m.tt - c), std::abs(m.tx + a), std::abs(m.xt + d),
                                  std::abs(m.xx - bb)});
               }});
  return s;
}

}  // namespace

bool PropertyReport::all_passed() const {
  return std::all_of(checks.begin(), checks.end(), [](const PropertyCheck& c) { return c.passed; });
}

std::string PropertyReport::table() const {
  std::string out;
  char buf[160];
  std::snprintf(buf, sizeof buf, "%-28s %8s %12s %10s  %s\n", "check", "samples", "max_resid",
                "tolerance", "status");
  out += buf;
  for (const auto& c : checks) {
    std::snprintf(buf, sizeof buf, "%-28s %8zu %12.3e %10.1e  %s\n", c.name.c_str(), c.samples,
                  c.max_residual, c.tolerance, c.passed ? "PASS" : "FAIL");
    out += buf;
  }
  return out;
}

std::vector<std::string> property_check_names() {
  std::vector<std::string> names;
  for (const auto& s : make_specs()) names.emplace_back(s.name);
  return names;
}

PropertyReport run_property_suite(const PropertySuiteOptions& options) {
  PropertyReport rep;
  rep.seed = options.seed;
  auto specs = make_specs();
  for (const auto& [name, tol] : options.tolerances) {
    bool known = std::any_of(specs.begin(), specs.end(), [&](const Spec& s) { return name == s.name; });
    if (!known) throw ValidationError("tolerance override for unknown check '" + name + "'");
    if (!(tol >= 0.0)) throw ValidationError("tolerance." + name + " must be >= 0");
  }
  if (!(options.sample_scale > 0.0)) throw ValidationError("sample_scale must be > 0");
  std::uint64_t index = 0;
  for (const auto& s : specs) {
    // Independent stream per check so one check's sample count does not
    // shift another's samples.
    Rng rng(options.seed ^ (0x9E3779B97F4A7C15ULL * ++index));
    PropertyCheck c;
    c.name = s.name;
    c.tolerance = s.tolerance;
    if (auto it = options.tolerances.find(s.name); it != options.tolerances.end()) c.tolerance = it->second;
    c.samples = std::max<std::size_t>(1, static_cast<std::size_t>(std::llround(
                                             static_cast<double>(s.samples) * options.sample_scale)));
    for (std::size_t i = 0; i < c.samples; ++i) {
      double r = s.residual(rng);
      if (std::isnan(r)) r = INFINITY;
      c.max_residual = std::max(c.max_residual, r);
    }
    c.passed = c.max_residual <= c.tolerance;
    rep.checks.push_back(c);
  }
  return rep;
}

RunResult run_verify(const Config& cfg, const std::filesystem::path& out, bool& all_passed) {
  cfg.require_known({"seed", "sample_scale", "out"}, true);
  PropertySuiteOptions opt;
  opt.seed = cfg.get_u64("seed", opt.seed);
  opt.sample_scale = cfg.get_double("sample_scale", 1.0);
  for (const auto& [key, value] : cfg.entries()) {
    if (key.rfind("tolerance.", 0) == 0) opt.tolerances[key.substr(10)] = parse_real(value, key);
  }
  PropertyReport rep = run_property_suite(opt);
  all_passed = rep.all_passed();
  RunResult res;
  std::string text = "seed = " + std::to_string(rep.seed) + "\n" + rep.table();
  text += std::string("result = ") + (all_passed ? "PASS" : "FAIL") + "\n";
  write_file_atomic(out / "verify_report.txt", text);
  res.files.push_back(out / "verify_report.txt");
  res.summary = text;
  return res;
}

}  // namespace qcadsr
