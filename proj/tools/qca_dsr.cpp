// qca-dsr: command-line front end.
//
//   qca-dsr <subcommand> [--config FILE] [--out DIR] [--seed N] [overrides]
//
// Exit status: 0 success, 1 invalid input, 2 numerical failure, 3 I/O error.

#include <CLI11.hpp>

#include <cstdio>
#include <filesystem>
#include <iostream>
#include <optional>
#include <string>

#include "qcadsr/config.hpp"
#include "qcadsr/errors.hpp"
#include "qcadsr/experiments.hpp"
#include "qcadsr/property_suite.hpp"

namespace {

enum Exit { kOk = 0, kValidation = 1, kNumerical = 2, kIo = 3 };

struct Options {
  std::string config;
  std::optional<std::string> out, seed, mass, beta, cells, steps, k0, sigma_k;
};

int run(const std::string& cmd, const Options& o) {
  qcadsr::Config cfg = o.config.empty() ? qcadsr::Config{} : qcadsr::Config::load(o.config);
  auto over = [&](const char* key, const std::optional<std::string>& v) {
    if (v) cfg.set(key, *v);
  };
  over("seed", o.seed);
  over("mass", o.mass);
  over("beta", o.beta);
  over("cells", o.cells);
  over("steps", o.steps);
  over("k0", o.k0);
  over("sigma_k", o.sigma_k);
  std::filesystem::path out = o.out ? *o.out : cfg.get_string("out", "results");

  qcadsr::RunResult res;
  if (cmd == "dispersion") {
    res = qcadsr::run_dispersion_sweep(cfg, out);
  } else if (cmd == "boost-point") {
    res = qcadsr::run_boost_point(cfg, out);
  } else if (cmd == "boost-localized") {
    res = qcadsr::run_boost_localized(cfg, out);
  } else if (cmd == "boost-packet") {
    res = qcadsr::run_boost_packet(cfg, out);
  } else if (cmd == "relative-locality") {
    res = qcadsr::run_relative_locality(cfg, out);
  } else if (cmd == "evolve") {
    res = qcadsr::run_evolve(cfg, out);
  } else {
    bool ok = false;
    res = qcadsr::run_verify(cfg, out, ok);
    std::cout << res.summary;
    return ok ? kOk : kNumerical;
  }
  std::cout << res.summary << "\n";
  for (const auto& f : res.files) std::cout << "  wrote " << f.string() << "\n";
  return kOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Dirac quantum cellular automaton and its deformed boosts"};
  app.require_subcommand(1);
  Options o;
  app.add_option("--config", o.config, "key = value configuration file");
  app.add_option("--out", o.out, "output directory (default: results)");
  app.add_option("--seed", o.seed, "random seed for verify");
  app.add_option("--mass", o.mass, "automaton mass m in [0, 1] (list allowed)");
  app.add_option("--beta", o.beta, "boost velocity, |beta| < 1 (list allowed)");
  app.add_option("--cells", o.cells, "lattice size N (even)");
  app.add_option("--steps", o.steps, "number of time steps");
  app.add_option("--k0", o.k0, "packet wave-vector(s); 'pi/5' style accepted");
  app.add_option("--sigma-k", o.sigma_k, "packet spectral width");
  app.fallthrough();

  const char* cmds[][2] = {
      {"dispersion", "dispersion relation and group velocity over the zone"},
      {"boost-point", "deformed boost of on-shell points"},
      {"boost-localized", "boost of a state localized at one cell"},
      {"boost-packet", "boost of Gaussian wave-packets"},
      {"relative-locality", "two-pair coincidence experiment"},
      {"evolve", "time evolution of a one-particle state"},
      {"verify", "randomized invariant sweeps; nonzero exit on failure"},
  };
  for (auto& c : cmds) app.add_subcommand(c[0], c[1])->fallthrough();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? kOk : kValidation;
  }

  const std::string cmd = app.get_subcommands().front()->get_name();
  try {
    return run(cmd, o);
  } catch (const qcadsr::IoError& e) {
    std::cerr << "I/O error: " << e.what() << "\n";
    return kIo;
  } catch (const qcadsr::ValidationError& e) {
    std::cerr << "invalid input: " << e.what() << "\n";
    return kValidation;
  } catch (const qcadsr::DomainError& e) {
    std::cerr << "invalid input: " << e.what() << "\n";
    return kValidation;
  } catch (const qcadsr::NumericalError& e) {
    std::cerr << "numerical failure: " << e.what() << "\n";
    return kNumerical;
  } catch (const std::filesystem::filesystem_error& e) {
    std::cerr << "I/O error: " << e.what() << "\n";
    return kIo;
  }
}
