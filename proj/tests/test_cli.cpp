// Runs the qca-dsr executable and checks exit codes and emitted files.

#include <gtest/gtest.h>
#include <sys/wait.h>

#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <string>

#include "qcadsr/csv.hpp"

namespace fs = std::filesystem;
using namespace qcadsr;

namespace {

int run_cli(const std::string& args) {
  std::string cmd = std::string(QCA_DSR_EXE) + " " + args + " >/dev/null 2>&1";
  int rc = std::system(cmd.c_str());
  return WIFEXITED(rc) ? WEXITSTATUS(rc) : -1;
}

class Cli : public ::testing::Test {
 protected:
  void SetUp() override {
    dir = fs::temp_directory_path() /
          ("qcadsr_cli_" + std::string(::testing::UnitTest::GetInstance()->current_test_info()->name()));
    fs::remove_all(dir);
    fs::create_directories(dir);
  }
  void TearDown() override { fs::remove_all(dir); }
  std::string out(const std::string& sub) const { return (dir / sub).string(); }
  fs::path dir;
};

double column_sum(const CsvData& d, const std::string& name) {
  std::size_t c = d.column(name);
  double s = 0.0;
  for (const auto& row : d.rows) s += std::stod(row[c]);
  return s;
}

}  // namespace

TEST_F(Cli, ExitCodes) {
  EXPECT_EQ(run_cli(""), 1);
  EXPECT_EQ(run_cli("nonsense"), 1);
  EXPECT_EQ(run_cli("dispersion --mass 1.5 --out " + out("a")), 1);
  EXPECT_EQ(run_cli("boost-point --beta 1 --out " + out("a")), 1);
  EXPECT_EQ(run_cli("boost-packet --cells 1001 --out " + out("a")), 1);
  EXPECT_EQ(run_cli("dispersion --config " + out("missing.cfg")), 3);
  EXPECT_EQ(run_cli("dispersion --out /proc/qcadsr_no_such_dir"), 3);
  EXPECT_EQ(run_cli("dispersion --out " + out("ok")), 0);
}

TEST_F(Cli, UnknownConfigKeyIsValidationError) {
  write_file_atomic(dir / "bad.cfg", "mass = 0.1\nmas = 0.2\n");
  EXPECT_EQ(run_cli("dispersion --config " + out("bad.cfg") + " --out " + out("a")), 1);
}

TEST_F(Cli, VerifyFailureIsNumericalExit) {
  write_file_atomic(dir / "v.cfg",
                    "sample_scale = 0.01\ntolerance.dispersion_invariance = 0\n");
  EXPECT_EQ(run_cli("verify --config " + out("v.cfg") + " --out " + out("v")), 2);
  write_file_atomic(dir / "ok.cfg", "sample_scale = 0.01\n");
  EXPECT_EQ(run_cli("verify --config " + out("ok.cfg") + " --out " + out("v2")), 0);
  EXPECT_TRUE(fs::exists(dir / "v2" / "verify_report.txt"));
}

TEST_F(Cli, DispersionFileContents) {
  ASSERT_EQ(run_cli("dispersion --mass 0,1 --out " + out("d")), 0);
  auto d = parse_csv(read_file(dir / "d" / "dispersion.csv"));
  EXPECT_EQ(d.header, (std::vector<std::string>{"m", "k", "omega", "v"}));
  std::size_t cm = d.column("m"), ck = d.column("k"), cw = d.column("omega");
  for (const auto& row : d.rows) {
    double m = std::stod(row[cm]), k = std::stod(row[ck]), w = std::stod(row[cw]);
    if (m == 1.0) EXPECT_NEAR(w, M_PI / 2, 1e-15);
    if (m == 0.0) EXPECT_NEAR(w, std::abs(k), 1e-15);
  }
}

TEST_F(Cli, DeterministicOutput) {
  ASSERT_EQ(run_cli("boost-localized --mass 0.1 --beta -0.99 --cells 512 --out " + out("r1")), 0);
  ASSERT_EQ(run_cli("boost-localized --mass 0.1 --beta -0.99 --cells 512 --out " + out("r2")), 0);
  int files = 0;
  for (const auto& e : fs::directory_iterator(dir / "r1")) {
    EXPECT_EQ(read_file(e.path()), read_file(dir / "r2" / e.path().filename())) << e.path();
    ++files;
  }
  EXPECT_GE(files, 5);
}

TEST_F(Cli, BoostLocalizedNormsAndIdentity) {
  ASSERT_EQ(run_cli("boost-localized --mass 0.1 --beta 0,-0.99 --cells 1024 --out " + out("b")), 0);
  for (const char* tag : {"m0.1_beta0", "m0.1_beta-0.99"}) {
    auto d = parse_csv(read_file(dir / "b" / ("localized_" + std::string(tag) + "_density.csv")));
    for (const char* col : {"input", "lab", "boosted"}) {
      EXPECT_NEAR(column_sum(d, col), 1.0, 1e-8) << tag << " " << col;
    }
  }
  auto z = parse_csv(read_file(dir / "b" / "localized_m0.1_beta0_density.csv"));
  std::size_t cl = z.column("lab"), cb = z.column("boosted");
  for (const auto& row : z.rows) EXPECT_NEAR(std::stod(row[cl]), std::stod(row[cb]), 1e-12);
}

TEST_F(Cli, EvolveReadsStateFile) {
  ASSERT_EQ(run_cli("evolve --cells 256 --steps 20 --out " + out("e1")), 0);
  write_file_atomic(dir / "in.cfg",
                    "initial = file\ninput = " + (dir / "e1" / "evolve_state.csv").string() +
                        "\nmethod = both\nsteps = 30\n");
  ASSERT_EQ(run_cli("evolve --config " + out("in.cfg") + " --out " + out("e2")), 0);
  std::string summary = read_file(dir / "e2" / "evolve_summary.txt");
  EXPECT_NE(summary.find("max_direct_spectral_deviation"), std::string::npos);
}

TEST_F(Cli, RelativeLocalityReportEchoesConfig) {
  write_file_atomic(dir / "rl.cfg",
                    "cells = 4096\nsigma_k = 0.02\nk1 = 0.5\nk2 = 0.5\nevent_x = -300\n"
                    "time_span = 300\n");
  ASSERT_EQ(run_cli("relative-locality --config " + out("rl.cfg") + " --out " + out("rl")), 0);
  std::string rep = read_file(dir / "rl" / "relative_locality.txt");
  EXPECT_NE(rep.find("config.k1 = 0.5"), std::string::npos) << rep;
  EXPECT_NE(rep.find("delta_pred = 0\n"), std::string::npos) << rep;
  auto traj = parse_csv(read_file(dir / "rl" / "relative_locality_trajectories.csv"));
  EXPECT_NO_THROW(traj.column("x_fit_pair1"));
  EXPECT_NO_THROW(traj.column("frame"));
}
