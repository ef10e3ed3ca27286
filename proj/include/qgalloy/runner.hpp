#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "qgalloy/config.hpp"

namespace qgalloy {

inline constexpr const char* kVersion = "qgalloy 1.0.0";

struct RunOptions {
  std::string config_path;
  std::string output_dir;  // overrides [experiment] output when nonempty
  std::optional<std::uint64_t> seed;
  std::optional<int> threads;
  std::vector<std::pair<std::string, std::string>> overrides;  // dotted key, value
};

// Executes the configured experiment, writing <output>/report.csv and
// <output>/summary.txt.  Exit status: 0 all PASS, 2 any FAIL flag,
// 1 error (message on stderr).
int run_experiment(const RunOptions& options);

// Dry-run checks: bounds on eps and lambda0 vs the mesh ceiling,
// distribution parameters, summability ratios.  No sampling.
int validate_config(const RunOptions& options);

// Closed-form spectra of the analytic fixtures: interval, loop, star.
int print_oracle(const std::string& fixture, double length, int arms, double upto);

}  // namespace qgalloy
