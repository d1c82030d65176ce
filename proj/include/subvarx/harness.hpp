#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "subvarx/damage.hpp"
#include "subvarx/estimate.hpp"
#include "subvarx/simulate.hpp"

namespace subvarx {

/// exact: integration grid = sample grid, no noise; the estimator sees data
/// that satisfies the model class to machine precision.
/// realistic: ten integration substeps per sample, so the sampled process is
/// only approximated by the model class.
enum class SuiteMode { exact, realistic };

std::string to_string(SuiteMode mode);
SuiteMode suite_mode_from_string(const std::string &text);

/// One experiment: a (possibly damaged) chain, how to excite and sample it,
/// and the expected outcome it is checked against.
struct ScenarioSpec {
  std::string name;
  ChainModel chain; // healthy chain; damage applied at run time
  SubstructureSpec substructure;
  int excitation_dof = 0;
  SimConfig sim; // sim.seed is the per-scenario seed
  std::optional<int> spring;
  double severity = 0.0;
  Verdict expected_verdict = Verdict::healthy;
  std::optional<int> expected_spring;
  double severity_tolerance = 0.01;
};

struct ScenarioRow {
  std::string scenario;
  std::uint64_t seed = 0;
  std::optional<int> injected_spring;
  double injected_severity = 0.0;
  Verdict expected_verdict = Verdict::healthy;
  std::optional<int> expected_spring;
  DamageReport report;
  EstimationDiagnostics diagnostics;
  bool pass = false;
};

struct SuiteResult {
  std::vector<ScenarioRow> rows;
  std::uint64_t baseline_seed = 0;
  std::vector<std::uint64_t> calibration_seeds;
  double threshold = 0.0;
  std::string config_digest;

  bool all_pass() const;
};

/// Everything needed to spell out a scenario grid: one healthy run plus one
/// run per (spring, severity) pair. The springs are the substructure springs
/// plus the bottom and top spring of the chain as external controls.
struct SuiteDefinition {
  ChainModel chain;
  SubstructureSpec substructure;
  int excitation_dof = 0;
  SimConfig sim; // seed ignored; scenario seeds derive from base_seed
  std::vector<double> severities;
  std::uint64_t base_seed = 0;
  SuiteMode mode = SuiteMode::exact;
};

std::vector<ScenarioSpec> build_suite(const SuiteDefinition &definition);

/// The stock grid: 8-DOF chain of 100 kg floors and 1e6 N/m springs,
/// interfaces at DOFs 2 and 6, excitation at the top, 20 s at 1 kHz,
/// springs {1, 3, 4, 5, 6, 8} x severities {5%, 10%, 20%} plus healthy;
/// 19 scenarios, seed i = base_seed + i.
std::vector<ScenarioSpec> stock_suite(std::uint64_t base_seed, SuiteMode mode);

/// Executes one scenario against the baseline model and threshold and checks
/// it against its expectation. Errors from the pipeline are rethrown with the
/// scenario name attached.
ScenarioRow run_scenario(const ScenarioSpec &spec, const VarxModel &baseline, double threshold);

/// Estimates the healthy baseline (seed = first scenario seed + 1000), runs
/// `calibration_runs` healthy simulations (+1001, +1002, ...) to calibrate
/// the threshold, then executes every scenario. Rows may run concurrently;
/// the result is deterministic either way. parallelism 0 means one task per
/// hardware thread.
SuiteResult run_suite(const std::vector<ScenarioSpec> &scenarios, int calibration_runs,
                      unsigned parallelism = 0);

enum class ReportFormat { table, structured };

/// table: one delimiter-separated line per scenario. structured: the full
/// nested JSON document, byte-stable for a given suite result.
std::string emit_report(const SuiteResult &result, ReportFormat format);

} // namespace subvarx
