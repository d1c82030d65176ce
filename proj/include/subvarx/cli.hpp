#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "subvarx/harness.hpp"

namespace subvarx {

namespace exit_code {
inline constexpr int ok = 0;
inline constexpr int suite_failure = 1;
inline constexpr int config = 2;
inline constexpr int stability = 3;
inline constexpr int estimation = 4;
} // namespace exit_code

/// Optional per-scenario expectation override in the suite config, used to
/// exercise the failure path deliberately.
struct ExpectationOverride {
  Verdict verdict = Verdict::healthy;
  std::optional<int> spring;
};

/// Fully resolved configuration: file values with command-line overrides
/// applied, validated before any command runs.
struct CliConfig {
  ChainModel chain;
  SubstructureSpec substructure;
  SimConfig sim;
  int excitation_dof = 0;
  std::vector<double> severities;
  std::uint64_t base_seed = 0;
  SuiteMode mode = SuiteMode::exact;
  int calibration_runs = 30;
  std::map<std::string, ExpectationOverride> expectations;
};

struct CliOverrides {
  std::optional<std::uint64_t> seed;
  std::optional<SuiteMode> mode;
};

/// Loads the JSON config, fills unset fields with the stock 8-DOF setup,
/// applies overrides, validates. Throws ConfigError naming the bad field.
CliConfig load_cli_config(const std::filesystem::path &path, const CliOverrides &overrides = {});

/// Entry point behind the `subvarx` binary; args excludes the program name.
/// Exit codes: 0 success, 1 suite row failure, 2 configuration or input
/// validation, 3 stability violation, 4 estimation failure.
int run_cli(const std::vector<std::string> &args);

} // namespace subvarx
