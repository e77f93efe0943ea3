#include <gtest/gtest.h>

#include <Eigen/Dense>

#include <cmath>
#include <random>

#include "qcadsr/errors.hpp"
#include "qcadsr/fft.hpp"
#include "qcadsr/qca_engine.hpp"
#include "qcadsr/wavepackets.hpp"

using namespace qcadsr;

namespace {

MassParam M(double m) { return MassParam::make(m); }

LatticeState random_state(std::size_t n, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> d;
  LatticeState s = LatticeState::zeros(n);
  for (std::size_t x = 0; x < n; ++x) {
    s.r[x] = cplx(d(rng), d(rng));
    s.l[x] = cplx(d(rng), d(rng));
  }
  double nr = std::sqrt(s.norm());
  for (std::size_t x = 0; x < n; ++x) {
    s.r[x] /= nr;
    s.l[x] /= nr;
  }
  return s;
}

double max_dev(const LatticeState& a, const LatticeState& b) {
  double r = 0.0;
  for (std::size_t x = 0; x < a.size(); ++x) {
    r = std::max({r, std::abs(a.r[x] - b.r[x]), std::abs(a.l[x] - b.l[x])});
  }
  return r;
}

// Dense N x N shift-and-mix matrix of one step; the test oracle for small N.
Eigen::MatrixXcd dense_step(std::size_t n, double m) {
  double nn = std::sqrt(1 - m * m);
  Eigen::MatrixXcd u = Eigen::MatrixXcd::Zero(2 * n, 2 * n);
  const cplx mi(0, -m);
  for (std::size_t x = 0; x < n; ++x) {
    u(x, (x + 1) % n) = nn;
    u(x, n + x) = mi;
    u(n + x, x) = mi;
    u(n + x, n + (x + n - 1) % n) = nn;
  }
  return u;
}

}  // namespace

TEST(Fft, MatchesNaiveTransform) {
  const std::size_t n = 16;
  auto s = random_state(n, 1);
  std::vector<cplx> out(n);
  fft::lattice_to_spectrum(s.r, out);
  for (std::size_t j = 0; j < n; ++j) {
    cplx acc = 0.0;
    for (std::size_t x = 0; x < n; ++x) acc += std::polar(1.0, -grid_k(j, n) * double(x)) * s.r[x];
    EXPECT_LT(std::abs(out[j] - acc), 1e-13);
  }
  std::vector<cplx> back(n);
  fft::spectrum_to_lattice(out, back);
  for (std::size_t x = 0; x < n; ++x) EXPECT_LT(std::abs(back[x] - s.r[x]), 1e-15);
  std::vector<cplx> odd(7);
  EXPECT_THROW(fft::lattice_to_spectrum(odd, odd), DomainError);
}

TEST(Eigensystem, MassOneAtOrigin) {
  auto u = eigensystem(0.0, M(1.0));
  EXPECT_NEAR(std::abs(u.matrix[0][0]), 0.0, 1e-15);
  EXPECT_NEAR(std::abs(u.matrix[0][1] - cplx(0, -1)), 0.0, 1e-15);
  EXPECT_NEAR(std::abs(u.matrix[1][0] - cplx(0, -1)), 0.0, 1e-15);
  EXPECT_NEAR(u.omega, kHalfPi, 1e-15);
}

TEST(Eigensystem, UnitaryAndEigenpairs) {
  std::mt19937_64 rng(4);
  std::uniform_real_distribution<double> uk(-kPi, kPi), um(0.0, 1.0);
  for (int i = 0; i < 1000; ++i) {
    double k = uk(rng), m = um(rng);
    auto u = eigensystem(k, M(m));
    Eigen::Matrix2cd U;
    U << u.matrix[0][0], u.matrix[0][1], u.matrix[1][0], u.matrix[1][1];
    EXPECT_LT((U * U.adjoint() - Eigen::Matrix2cd::Identity()).norm(), 1e-14);
    EXPECT_NEAR(u.omega, dispersion(k, M(m)).omega, 1e-12);
    Eigen::Vector2cd ep(u.e_plus[0], u.e_plus[1]), em(u.e_minus[0], u.e_minus[1]);
    EXPECT_NEAR(ep.norm(), 1.0, 1e-14);
    EXPECT_NEAR(std::abs(ep.dot(em)), 0.0, 1e-14);
    EXPECT_LT((U * ep - std::polar(1.0, -u.omega) * ep).norm(), 1e-13);
    EXPECT_LT((U * em - std::polar(1.0, u.omega) * em).norm(), 1e-13);
  }
}

TEST(Eigensystem, DegenerateMasslessPoint) {
  auto u = eigensystem(0.0, M(0.0));
  EXPECT_TRUE(u.degenerate);
  EXPECT_EQ(u.e_plus[0], 1.0);
  EXPECT_EQ(u.e_minus[1], 1.0);
}

TEST(Step, MasslessTranslates) {
  auto s = random_state(8, 2);
  auto t = step_direct(s, M(0.0));
  for (std::size_t x = 0; x < 8; ++x) {
    EXPECT_EQ(t.r[x], s.r[(x + 1) % 8]);
    EXPECT_EQ(t.l[x], s.l[(x + 7) % 8]);
  }
}

TEST(Step, FullMassSwaps) {
  auto s = random_state(8, 3);
  auto t = step_direct(s, M(1.0));
  for (std::size_t x = 0; x < 8; ++x) {
    EXPECT_LT(std::abs(t.r[x] - cplx(0, -1) * s.l[x]), 1e-16);
    EXPECT_LT(std::abs(t.l[x] - cplx(0, -1) * s.r[x]), 1e-16);
  }
}

TEST(Step, MatchesDenseMatrix) {
  const std::size_t n = 10;
  auto s = random_state(n, 5);
  Eigen::VectorXcd v(2 * n);
  for (std::size_t x = 0; x < n; ++x) {
    v(x) = s.r[x];
    v(n + x) = s.l[x];
  }
  Eigen::VectorXcd w = dense_step(n, 0.35) * v;
  auto t = step_direct(s, M(0.35));
  for (std::size_t x = 0; x < n; ++x) {
    EXPECT_LT(std::abs(t.r[x] - w(x)), 1e-15);
    EXPECT_LT(std::abs(t.l[x] - w(n + x)), 1e-15);
  }
}

TEST(Step, TranslationCovariant) {
  const std::size_t n = 64;
  auto s = random_state(n, 6);
  LatticeState sh = LatticeState::zeros(n);
  for (std::size_t x = 0; x < n; ++x) {
    sh.r[(x + 5) % n] = s.r[x];
    sh.l[(x + 5) % n] = s.l[x];
  }
  auto a = step_direct(s, M(0.4)), b = step_direct(sh, M(0.4));
  for (std::size_t x = 0; x < n; ++x) {
    EXPECT_LT(std::abs(b.r[(x + 5) % n] - a.r[x]), 1e-14);
    EXPECT_LT(std::abs(b.l[(x + 5) % n] - a.l[x]), 1e-14);
  }
}

TEST(Evolution, DirectEqualsSpectral) {
  for (std::uint64_t seed = 0; seed < 3; ++seed) {
    auto s = random_state(256, 100 + seed);
    auto a = evolve_direct(s, M(0.3), 100);
    auto b = evolve_spectral(s, M(0.3), 100);
    EXPECT_LT(max_dev(a, b), 1e-10);
  }
}

TEST(Evolution, ZeroStepsAndBackwards) {
  auto s = random_state(64, 7);
  EXPECT_LT(max_dev(evolve_spectral(s, M(0.5), 0), s), 1e-15);
  auto back = evolve_spectral(evolve_spectral(s, M(0.5), 37), M(0.5), -37);
  EXPECT_LT(max_dev(back, s), 1e-13);
}

TEST(Evolution, NormPreservedLongRun) {
  auto s = random_state(128, 8);
  EXPECT_NEAR(evolve_spectral(s, M(0.2), 10000).norm(), 1.0, 1e-12);
  EXPECT_NEAR(evolve_direct(s, M(0.2), 10000).norm(), 1.0, 1e-12);
}

TEST(Evolution, SingleModePhases) {
  const std::size_t n = 32, j = 11;
  MassParam mp = M(0.45);
  double k = grid_k(j, n);
  auto u = eigensystem(k, mp);
  // Plane wave exp(i k x) e_plus.
  LatticeState s = LatticeState::zeros(n);
  for (std::size_t x = 0; x < n; ++x) {
    cplx ph = std::polar(1.0, k * double(x));
    s.r[x] = ph * u.e_plus[0];
    s.l[x] = ph * u.e_plus[1];
  }
  const std::int64_t T = 57;
  auto t = evolve_spectral(s, mp, T);
  cplx expect = std::polar(1.0, -u.omega * double(T));
  for (std::size_t x = 0; x < n; ++x) {
    EXPECT_LT(std::abs(t.r[x] - expect * s.r[x]), 1e-12);
    EXPECT_LT(std::abs(t.l[x] - expect * s.l[x]), 1e-12);
  }
}

TEST(Localized, Basics) {
  auto s = localized_state(3, {cplx(1, 0), cplx(0, 0)}, 16);
  EXPECT_EQ(s.r[3], cplx(1, 0));
  EXPECT_DOUBLE_EQ(s.norm(), 1.0);
  auto d = position_density(s);
  int nonzero = 0;
  for (double p : d) nonzero += p != 0.0;
  EXPECT_EQ(nonzero, 1);
  EXPECT_THROW(localized_state(16, {cplx(1, 0), cplx(0, 0)}, 16), DomainError);
  EXPECT_THROW(localized_state(0, {cplx(1, 0), cplx(1, 0)}, 16), DomainError);
}

TEST(Density, SumsToNormAndIgnoresPhase) {
  auto s = random_state(50, 9);
  auto d = position_density(s);
  double sum = 0.0;
  for (double p : d) sum += p;
  EXPECT_NEAR(sum, 1.0, 1e-14);
  LatticeState t = s;
  for (std::size_t x = 0; x < 50; ++x) {
    t.r[x] *= std::polar(1.0, 0.7);
    t.l[x] *= std::polar(1.0, 0.7);
  }
  auto e = position_density(t);
  for (std::size_t x = 0; x < 50; ++x) EXPECT_NEAR(d[x], e[x], 1e-15);
}

TEST(Projection, LocalizedWeightsSumToOne) {
  const double r = 1 / std::sqrt(2.0);
  auto s = localized_state(0, {cplx(r, 0), cplx(0, r)}, 256);
  auto p = project_positive_branch(s, M(0.1));
  EXPECT_NEAR(p.positive_weight + p.negative_weight, 1.0, 1e-12);
  EXPECT_NEAR(p.amplitude.norm(), p.positive_weight, 1e-12);
}

TEST(Projection, EmbedProjectRoundTrip) {
  MassParam mp = M(0.3);
  auto amp = make_packet({0.4, 0.05, 10.0, mp}, 512);
  auto state = embed_positive_branch(amp);
  auto p = project_positive_branch(state, mp);
  EXPECT_NEAR(p.negative_weight, 0.0, 1e-24);
  const auto& a = amp.coefficients();
  const auto& b = p.amplitude.coefficients();
  for (std::size_t j = 0; j < a.size(); ++j) EXPECT_LT(std::abs(a[j] - b[j]), 1e-12);
  EXPECT_NEAR(state.norm(), amp.norm(), 1e-12);
}

TEST(SpectralAmplitude, OffGridEvaluationExactOnGrid) {
  auto amp = make_packet({0.6, 0.03, -40.0, M(0.2)}, 1024);
  std::vector<double> ks;
  for (std::size_t j = 600; j < 760; j += 7) ks.push_back(amp.k(j));
  auto f = amp.coefficients_at(ks);
  for (std::size_t i = 0; i < ks.size(); ++i) {
    EXPECT_LT(std::abs(f[i] - amp.coefficients()[600 + 7 * i]), 1e-12);
  }
}

TEST(SpectralAmplitude, OffGridMatchesAnalyticPacket) {
  // The packet is a Gaussian in k, so between grid points the interpolant
  // must follow the closed form.
  const double k0 = 0.6, s = 0.03, x0 = -40.0;
  MassParam mp = M(0.2);
  auto amp = make_packet({k0, s, x0, mp}, 1024);
  const std::size_t j = 700;
  double ratio_g = std::abs(amp.g(j)) / std::exp(-std::pow(amp.k(j) - k0, 2) / (4 * s * s));
  std::vector<double> ks = {k0 - 0.031, k0 + 0.0012, k0 + 0.047};
  auto g = amp.g_at(ks);
  for (std::size_t i = 0; i < ks.size(); ++i) {
    cplx expect = ratio_g * std::exp(-std::pow(ks[i] - k0, 2) / (4 * s * s)) *
                  std::polar(1.0, -ks[i] * x0);
    cplx phase0 = amp.g(j) / std::abs(amp.g(j)) / std::polar(1.0, -amp.k(j) * x0);
    EXPECT_LT(std::abs(g[i] - expect * phase0), 1e-9) << ks[i];
  }
}

TEST(BoostState, IdentityAtZero) {
  auto amp = make_packet({0.3, 0.02, 0.0, M(0.1)}, 1024);
  auto out = boost_state(amp, Boost::make(0.0)).amplitude;
  for (std::size_t j = 0; j < amp.size(); ++j) {
    EXPECT_EQ(out.coefficients()[j], amp.coefficients()[j]);
  }
}

TEST(BoostState, NormPreserved) {
  for (double k0 : {0.3, -0.8, 2.4}) {
    auto amp = make_packet({k0, 0.02, 0.0, M(0.1)}, 4096);
    auto out = boost_state(amp, Boost::make(-0.99));
    EXPECT_NEAR(out.amplitude.norm(), amp.norm(), 1e-8) << k0;
    EXPECT_FALSE(out.near_fixed_point_warning);
  }
}

TEST(BoostState, RegionOfSupportPreserved) {
  auto amp = make_packet({2.4, 0.02, 0.0, M(0.1)}, 4096);
  auto out = boost_state(amp, Boost::make(0.8)).amplitude;
  double in_b1 = 0.0;
  for (std::size_t j = 0; j < out.size(); ++j) {
    if (std::abs(out.k(j)) < kHalfPi) in_b1 += std::norm(out.coefficients()[j]) * out.dk();
  }
  EXPECT_LT(in_b1, 1e-10);
}

TEST(BoostState, MovesPeakToBoostedWaveVector) {
  MassParam mp = M(0.1);
  auto amp = make_packet({0.3, 0.01, 0.0, mp}, 4096);
  Boost b = Boost::make(0.5);
  auto out = boost_state(amp, b).amplitude;
  std::size_t best = 0;
  for (std::size_t j = 0; j < out.size(); ++j) {
    if (std::abs(out.g(j)) > std::abs(out.g(best))) best = j;
  }
  double expect = deformed_boost(dispersion(0.3, mp), b).k;
  EXPECT_NEAR(out.k(best), expect, 2 * out.dk());
}

TEST(BoostState, CompositionOfTwoBoosts) {
  MassParam mp = M(0.2);
  auto amp = make_packet({0.5, 0.02, 30.0, mp}, 4096);
  Boost b1 = Boost::make(0.3), b2 = Boost::make(-0.6);
  auto two = boost_state(boost_state(amp, b1).amplitude, b2).amplitude;
  auto one = boost_state(amp, velocity_composition(b1, b2)).amplitude;
  double d2 = 0.0;
  for (std::size_t j = 0; j < amp.size(); ++j) {
    d2 += std::norm(two.coefficients()[j] - one.coefficients()[j]) * amp.dk();
  }
  EXPECT_LT(std::sqrt(d2), 1e-6);
}

TEST(BoostState, LocalizedStateDelocalizes) {
  MassParam mp = M(0.1);
  auto s = localized_state(0, {cplx(1, 0), cplx(0, 0)}, 4096);
  auto p = project_positive_branch(s, mp);
  auto out = boost_state(p.amplitude, Boost::make(-0.99));
  EXPECT_NEAR(out.amplitude.norm(), p.amplitude.norm(), 1e-8);
  auto lab = position_density(embed_positive_branch(p.amplitude));
  auto d = position_density(embed_positive_branch(out.amplitude));
  EXPECT_GT(density_width(d), 2.0 * density_width(lab));
  EXPECT_LT(d[0], lab[0]);
  double pk = locate_peak(d);
  EXPECT_NEAR(std::min(pk, double(d.size()) - pk), 0.0, 1e-9);
  // Real spectra keep the density symmetric about x0; the boost shows up as a
  // transfer of spectral weight between k < 0 and k > 0.
  auto upper = [](const SpectralAmplitude& a) {
    double w = 0.0, all = 0.0;
    for (std::size_t j = 0; j < a.size(); ++j) {
      double q = std::norm(a.coefficients()[j]);
      all += q;
      if (a.k(j) > 0.0) w += q;
    }
    return w / all;
  };
  EXPECT_GT(upper(out.amplitude) - upper(p.amplitude), 0.2);
}
