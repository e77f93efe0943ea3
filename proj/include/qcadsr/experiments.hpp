#pragma once

// Experiment drivers behind the command-line subcommands. Each reads its keys
// from a Config, validates them, writes its files under `out`, and returns
// the list of files plus a short human-readable summary.

#include <filesystem>
#include <string>
#include <vector>

#include "qcadsr/config.hpp"

namespace qcadsr {

struct RunResult {
  std::vector<std::filesystem::path> files;
  std::string summary;
};

/// dispersion.csv with columns m, k, omega, v.
RunResult run_dispersion_sweep(const Config& cfg, const std::filesystem::path& out);
/// boost_point.csv: deformed boost of on-shell points, one row per (m, beta, k).
RunResult run_boost_point(const Config& cfg, const std::filesystem::path& out);
/// Boost of a state localized at one cell, for each (m, beta).
RunResult run_boost_localized(const Config& cfg, const std::filesystem::path& out);
/// Boost of Gaussian packets, for each (m, beta, k0).
RunResult run_boost_packet(const Config& cfg, const std::filesystem::path& out);
RunResult run_relative_locality(const Config& cfg, const std::filesystem::path& out);
/// Time evolution of a packet, a localized state or a state read from CSV.
RunResult run_evolve(const Config& cfg, const std::filesystem::path& out);

/// Compact tag for file names, e.g. "m0.1_beta-0.99".
std::string run_tag(double m, double beta);

}  // namespace qcadsr
