#pragma once

// Randomized invariant sweeps over all modules, used by `verify`.

#include <cstdint>
#include <filesystem>
#include <map>
#include <string>
#include <vector>

#include "qcadsr/config.hpp"
#include "qcadsr/experiments.hpp"

namespace qcadsr {

struct PropertyCheck {
  std::string name;
  std::size_t samples = 0;
  double max_residual = 0.0;
  double tolerance = 0.0;
  bool passed = false;
};

struct PropertySuiteOptions {
  std::uint64_t seed = 20240611;
  /// Multiplies every sample count (at least one sample per check).
  double sample_scale = 1.0;
  /// Replaces the default tolerance of the named check.
  std::map<std::string, double> tolerances;
};

struct PropertyReport {
  std::uint64_t seed = 0;
  std::vector<PropertyCheck> checks;
  bool all_passed() const;
  /// Fixed-width pass/fail table.
  std::string table() const;
};

/// Names of the checks in execution order.
std::vector<std::string> property_check_names();

PropertyReport run_property_suite(const PropertySuiteOptions& options);

/// Reads seed, sample_scale and tolerance.<check> keys, writes
/// verify_report.txt. The caller maps a failed suite to a nonzero exit.
RunResult run_verify(const Config& cfg, const std::filesystem::path& out, bool& all_passed);

}  // namespace qcadsr
