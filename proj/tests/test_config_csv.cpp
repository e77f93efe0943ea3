#include <gtest/gtest.h>

#include <cmath>
#include <filesystem>
#include <random>

#include "qcadsr/config.hpp"
#include "qcadsr/csv.hpp"
#include "qcadsr/errors.hpp"
#include "qcadsr/property_suite.hpp"

using namespace qcadsr;

TEST(Config, ParsesKeyValueWithComments) {
  auto c = Config::parse(
      "# header\n"
      "mass = 0.1, 0.4   # trailing\n"
      "\n"
      "beta=-0.5\n"
      "k0 = pi/5\n"
      "cells = 4096\n");
  EXPECT_EQ(c.get_doubles("mass", {}), (std::vector<double>{0.1, 0.4}));
  EXPECT_DOUBLE_EQ(c.get_double("beta", 0.0), -0.5);
  EXPECT_DOUBLE_EQ(c.get_double("k0", 0.0), M_PI / 5);
  EXPECT_EQ(c.get_int("cells", 0), 4096);
  EXPECT_EQ(c.get_int("steps", 17), 17);
}

TEST(Config, PiForms) {
  EXPECT_DOUBLE_EQ(parse_real("-pi/2", "k"), -M_PI / 2);
  EXPECT_DOUBLE_EQ(parse_real("3pi/4", "k"), 3 * M_PI / 4);
  EXPECT_DOUBLE_EQ(parse_real("0.5*pi", "k"), 0.5 * M_PI);
  EXPECT_DOUBLE_EQ(parse_real("1e-3", "k"), 1e-3);
  EXPECT_THROW(parse_real("pie", "k"), ValidationError);
  EXPECT_THROW(parse_real("", "k"), ValidationError);
}

TEST(Config, ErrorsNameTheLine) {
  try {
    Config::parse("mass = 0.1\nmass = 0.2\n", "run.cfg");
    FAIL();
  } catch (const ValidationError& e) {
    EXPECT_NE(std::string(e.what()).find("run.cfg:2"), std::string::npos) << e.what();
  }
  EXPECT_THROW(Config::parse("no equals sign\n"), ValidationError);
  EXPECT_THROW(Config::parse("= 3\n"), ValidationError);
  EXPECT_THROW(Config::parse("b = x\n").get_int("b", 0), ValidationError);
}

TEST(Config, UnknownKeysRejected) {
  auto c = Config::parse("mass = 0.1\nbogus = 1\n");
  try {
    c.require_known({"mass"});
    FAIL();
  } catch (const ValidationError& e) {
    EXPECT_NE(std::string(e.what()).find("bogus"), std::string::npos);
  }
  auto t = Config::parse("tolerance.group_law = 1e-9\n");
  EXPECT_NO_THROW(t.require_known({}, true));
  EXPECT_THROW(t.require_known({}, false), ValidationError);
}

TEST(Config, OverridesReplace) {
  auto c = Config::parse("mass = 0.1\n");
  c.set("mass", "0.7");
  EXPECT_DOUBLE_EQ(c.get_double("mass", 0.0), 0.7);
}

TEST(Config, MissingFileIsIoError) {
  EXPECT_THROW(Config::load("/nonexistent/dir/x.cfg"), IoError);
}

TEST(Csv, SeventeenDigitsRoundTrip) {
  std::mt19937_64 rng(1);
  std::uniform_real_distribution<double> u(-1e3, 1e3);
  for (int i = 0; i < 1000; ++i) {
    double v = u(rng) * std::pow(10.0, (i % 40) - 20);
    EXPECT_EQ(std::stod(format_double(v)), v);
  }
  EXPECT_EQ(format_double(INFINITY), "inf");
}

TEST(Csv, TableHeaderAndWidthCheck) {
  CsvTable t({"a", "b"});
  t.add_row({"1", "2"});
  EXPECT_EQ(t.str(), "a,b\n1,2\n");
  EXPECT_THROW(t.add_row({"1"}), DomainError);
}

TEST(Csv, StateRoundTrip) {
  LatticeState s = LatticeState::zeros(6);
  std::mt19937_64 rng(2);
  std::normal_distribution<double> d;
  for (std::size_t x = 0; x < 6; ++x) {
    s.r[x] = cplx(d(rng), d(rng));
    s.l[x] = cplx(d(rng), d(rng));
  }
  std::string text = state_csv(s);
  EXPECT_EQ(text.substr(0, text.find('\n')), "x,re_psi_r,im_psi_r,re_psi_l,im_psi_l");
  LatticeState back = parse_state_csv(text);
  ASSERT_EQ(back.size(), 6u);
  for (std::size_t x = 0; x < 6; ++x) {
    EXPECT_EQ(back.r[x], s.r[x]);
    EXPECT_EQ(back.l[x], s.l[x]);
  }
  EXPECT_THROW(parse_state_csv("x,a\n0,1\n"), ValidationError);
}

TEST(Csv, SpectralHeader) {
  auto amp = SpectralAmplitude::from_coefficients(std::vector<cplx>(8, cplx(0.1, 0.0)),
                                                  MassParam::make(0.5));
  auto data = parse_csv(spectral_csv(amp));
  EXPECT_EQ(data.header, (std::vector<std::string>{"k", "re_g", "im_g", "mu"}));
  EXPECT_EQ(data.rows.size(), 8u);
}

TEST(Csv, AtomicWriteAndIoErrors) {
  auto dir = std::filesystem::temp_directory_path() / "qcadsr_csv_test";
  std::filesystem::create_directories(dir);
  write_file_atomic(dir / "a.txt", "hello\n");
  EXPECT_EQ(read_file(dir / "a.txt"), "hello\n");
  EXPECT_THROW(write_file_atomic("/proc/definitely/not/here.txt", "x"), IoError);
  EXPECT_THROW(read_file(dir / "missing.txt"), IoError);
  std::filesystem::remove_all(dir);
}

TEST(PropertySuite, SeedReproducesResiduals) {
  PropertySuiteOptions o;
  o.sample_scale = 0.01;
  auto a = run_property_suite(o);
  auto b = run_property_suite(o);
  ASSERT_EQ(a.checks.size(), b.checks.size());
  for (std::size_t i = 0; i < a.checks.size(); ++i) {
    EXPECT_EQ(a.checks[i].max_residual, b.checks[i].max_residual) << a.checks[i].name;
  }
  EXPECT_TRUE(a.all_passed()) << a.table();
}

TEST(PropertySuite, ToleranceOverride) {
  PropertySuiteOptions o;
  o.sample_scale = 0.01;
  o.tolerances["dispersion_invariance"] = 0.0;
  auto r = run_property_suite(o);
  EXPECT_FALSE(r.all_passed());
  for (const auto& c : r.checks) {
    if (c.name == "dispersion_invariance") {
      EXPECT_EQ(c.tolerance, 0.0);
      EXPECT_FALSE(c.passed);
    }
  }
  o.tolerances["dispersion_invariance"] = -1.0;
  EXPECT_THROW(run_property_suite(o), ValidationError);
  o.tolerances.clear();
  o.tolerances["no_such_check"] = 1.0;
  EXPECT_THROW(run_property_suite(o), ValidationError);
}
