#include "subvarx/harness.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <exception>
#include <future>
#include <thread>
#include <utility>

#include "subvarx/detail/digest.hpp"
#include "subvarx/io.hpp"

namespace subvarx {

namespace {

constexpr std::uint64_t baseline_seed_offset = 1000;
constexpr int min_calibration_runs = 10;

std::string percent_label(double severity) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%gpct", severity * 100.0);
  return buf;
}

std::string scenario_digest_text(const ScenarioSpec &spec) {
  std::string bytes = spec.name + ";";
  for (double m : spec.chain.masses)
    detail::append_hashed(bytes, m);
  for (double k : spec.chain.stiffnesses)
    detail::append_hashed(bytes, k);
  bytes += std::to_string(spec.substructure.lower_interface) + "," +
           std::to_string(spec.substructure.upper_interface) + "," + std::to_string(spec.excitation_dof) + ";";
  detail::append_hashed(bytes, spec.sim.ts);
  bytes += std::to_string(spec.sim.substep_ratio) + ",";
  detail::append_hashed(bytes, spec.sim.duration);
  detail::append_hashed(bytes, spec.sim.force_std);
  detail::append_hashed(bytes, spec.sim.measurement_noise_std);
  bytes += std::to_string(spec.sim.seed) + ";";
  bytes += (spec.spring ? std::to_string(*spec.spring) : "-") + ",";
  detail::append_hashed(bytes, spec.severity);
  bytes += to_string(spec.expected_verdict) + ",";
  bytes += (spec.expected_spring ? std::to_string(*spec.expected_spring) : "-") + ",";
  detail::append_hashed(bytes, spec.severity_tolerance);
  return bytes;
}

Estimate estimate_healthy(const ScenarioSpec &family, std::uint64_t seed) {
  SimConfig sim = family.sim;
  sim.seed = seed;
  const ForceRecord force = generate_excitation(sim, family.excitation_dof);
  const DisplacementRecord record = simulate(family.chain, force, sim);
  const SubstructureSignals signals = extract_substructure_signals(record, family.substructure);
  return estimate_varx(signals.endogenous, signals.exogenous);
}

/// Rethrows pipeline errors with the scenario name attached while keeping the
/// types the exit-code contract distinguishes.
template <typename Fn>
auto with_scenario_context(const std::string &name, Fn &&fn) {
  try {
    return fn();
  } catch (const StabilityViolation &) {
    throw; // message already names the cure; the type carries the fields
  } catch (const RankDeficient &error) {
    throw RankDeficient("scenario '" + name + "': " + error.what());
  } catch (const TooFewSamples &error) {
    throw TooFewSamples("scenario '" + name + "': " + error.what());
  } catch (const Error &error) {
    throw Error("scenario '" + name + "': " + error.what());
  }
}

} // namespace

std::string to_string(SuiteMode mode) {
  return mode == SuiteMode::exact ? "exact" : "realistic";
}

SuiteMode suite_mode_from_string(const std::string &text) {
  if (text == "exact")
    return SuiteMode::exact;
  if (text == "realistic")
    return SuiteMode::realistic;
  throw ConfigError("mode = '" + text + "': must be 'exact' or 'realistic'");
}

bool SuiteResult::all_pass() const {
  return std::all_of(rows.begin(), rows.end(), [](const ScenarioRow &row) { return row.pass; });
}

std::vector<ScenarioSpec> build_suite(const SuiteDefinition &definition) {
  validate_substructure(definition.chain, definition.substructure);
  validate(definition.sim);
  if (definition.excitation_dof < 1 || definition.excitation_dof > definition.chain.dof_count())
    throw ConfigError("excitation_dof = " + std::to_string(definition.excitation_dof) +
                      ": outside the chain's 1.." + std::to_string(definition.chain.dof_count()));
  for (double severity : definition.severities)
    if (!(severity > 0.0) || severity >= 1.0)
      throw ConfigError("severities must lie in (0, 1), got " + std::to_string(severity));

  SimConfig sim = definition.sim;
  if (definition.mode == SuiteMode::exact) {
    sim.substep_ratio = 1;
    sim.measurement_noise_std = 0.0;
  } else {
    sim.substep_ratio = 10;
  }
  const double tolerance = definition.mode == SuiteMode::exact ? 0.01 : 0.02;

  const int lower = definition.substructure.lower_interface;
  const int upper = definition.substructure.upper_interface;

  std::vector<ScenarioSpec> out;
  auto push = [&](std::string name, std::optional<int> spring, double severity) {
    ScenarioSpec spec;
    spec.name = std::move(name);
    spec.chain = definition.chain;
    spec.substructure = definition.substructure;
    spec.excitation_dof = definition.excitation_dof;
    spec.sim = sim;
    spec.sim.seed = definition.base_seed + out.size();
    spec.spring = spring;
    spec.severity = severity;
    const bool internal = spring && *spring > lower && *spring <= upper;
    spec.expected_verdict = internal ? Verdict::damaged : Verdict::healthy;
    if (internal)
      spec.expected_spring = *spring;
    spec.severity_tolerance = tolerance;
    out.push_back(std::move(spec));
  };

  push("healthy", std::nullopt, 0.0);
  std::vector<int> springs = {1};
  for (int j = lower + 1; j <= upper; ++j)
    springs.push_back(j);
  if (definition.chain.dof_count() > upper)
    springs.push_back(definition.chain.dof_count());
  for (int spring : springs)
    for (double severity : definition.severities)
      push("k" + std::to_string(spring) + "-" + percent_label(severity), spring, severity);
  return out;
}

std::vector<ScenarioSpec> stock_suite(std::uint64_t base_seed, SuiteMode mode) {
  SuiteDefinition definition;
  definition.chain = build_chain(Eigen::VectorXd::Constant(8, 100.0), Eigen::VectorXd::Constant(8, 1e6));
  definition.substructure = {2, 6};
  definition.excitation_dof = 8;
  definition.sim = SimConfig{};
  definition.severities = {0.05, 0.10, 0.20};
  definition.base_seed = base_seed;
  definition.mode = mode;
  return build_suite(definition);
}

ScenarioRow run_scenario(const ScenarioSpec &spec, const VarxModel &baseline, double threshold) {
  return with_scenario_context(spec.name, [&] {
    const ChainModel chain = spec.spring ? apply_damage(spec.chain, *spec.spring, spec.severity) : spec.chain;
    const ForceRecord force = generate_excitation(spec.sim, spec.excitation_dof);
    const DisplacementRecord record = simulate(chain, force, spec.sim);
    const SubstructureSignals signals = extract_substructure_signals(record, spec.substructure);
    const Estimate estimate = estimate_varx(signals.endogenous, signals.exogenous);

    const DamageIndicators indicators = damage_indicators(estimate.model, baseline);
    DamageReport report = localize(indicators, threshold, baseline.dimension());
    if (report.verdict == Verdict::damaged)
      report.severity_estimate = estimate_severity(estimate.model, baseline, *report.localized_spring);

    ScenarioRow row;
    row.scenario = spec.name;
    row.seed = spec.sim.seed;
    row.injected_spring = spec.spring;
    row.injected_severity = spec.severity;
    row.expected_verdict = spec.expected_verdict;
    row.expected_spring = spec.expected_spring;
    row.report = std::move(report);
    row.diagnostics = estimate.diagnostics;

    row.pass = row.report.verdict == spec.expected_verdict;
    if (spec.expected_verdict == Verdict::damaged) {
      row.pass = row.pass && row.report.localized_spring == spec.expected_spring &&
                 row.report.severity_estimate &&
                 std::abs(*row.report.severity_estimate - spec.severity) <= spec.severity_tolerance;
    }
    return row;
  });
}

SuiteResult run_suite(const std::vector<ScenarioSpec> &scenarios, int calibration_runs, unsigned parallelism) {
  SuiteResult result;
  if (scenarios.empty())
    return result;
  if (calibration_runs < min_calibration_runs)
    throw CalibrationFailed("threshold calibration needs at least " + std::to_string(min_calibration_runs) +
                            " healthy runs, got " + std::to_string(calibration_runs));

  std::string config_bytes = std::to_string(calibration_runs) + ";";
  for (const ScenarioSpec &spec : scenarios)
    config_bytes += scenario_digest_text(spec) + "\n";
  result.config_digest = detail::fnv1a_hex(config_bytes);

  // The baseline and every calibration run reuse the first scenario's setup
  // with seeds offset past the scenario block.
  const ScenarioSpec &family = scenarios.front();
  result.baseline_seed = family.sim.seed + baseline_seed_offset;
  const VarxModel baseline =
      with_scenario_context("baseline", [&] { return estimate_healthy(family, result.baseline_seed); }).model;

  std::vector<DamageIndicators> healthy_pool;
  healthy_pool.reserve(calibration_runs);
  for (int i = 1; i <= calibration_runs; ++i) {
    const std::uint64_t seed = result.baseline_seed + i;
    result.calibration_seeds.push_back(seed);
    with_scenario_context("calibration run " + std::to_string(i), [&] {
      healthy_pool.push_back(damage_indicators(estimate_healthy(family, seed).model, baseline));
      return 0;
    });
  }
  result.threshold = calibrate_threshold(healthy_pool);

  result.rows.resize(scenarios.size());
  unsigned workers = parallelism != 0 ? parallelism : std::thread::hardware_concurrency();
  workers = std::max(1u, std::min<unsigned>(workers, static_cast<unsigned>(scenarios.size())));

  std::atomic<std::size_t> cursor{0};
  std::vector<std::exception_ptr> failures(scenarios.size());
  auto worker = [&] {
    for (std::size_t i = cursor.fetch_add(1); i < scenarios.size(); i = cursor.fetch_add(1)) {
      try {
        result.rows[i] = run_scenario(scenarios[i], baseline, result.threshold);
      } catch (...) {
        failures[i] = std::current_exception();
      }
    }
  };
  std::vector<std::future<void>> tasks;
  for (unsigned w = 1; w < workers; ++w)
    tasks.push_back(std::async(std::launch::async, worker));
  worker();
  for (auto &task : tasks)
    task.get();
  for (const std::exception_ptr &failure : failures)
    if (failure)
      std::rethrow_exception(failure);
  return result;
}

std::string emit_report(const SuiteResult &result, ReportFormat format) {
  if (format == ReportFormat::structured)
    return suite_result_to_json(result).dump(2) + "\n";

  std::string out = "scenario,spring,severity,verdict,localized_spring,estimated_severity,max_di,pass\n";
  for (const ScenarioRow &row : result.rows) {
    double max_di = 0.0;
    for (const auto &[element, di] : row.report.indicators.values)
      max_di = std::max(max_di, di);
    char buf[160];
    std::snprintf(buf, sizeof buf, "%s,%s,%g,%s,%s,%s,%.6e,%s\n", row.scenario.c_str(),
                  row.injected_spring ? ("k" + std::to_string(*row.injected_spring)).c_str() : "-",
                  row.injected_severity, to_string(row.report.verdict).c_str(),
                  row.report.localized_spring ? ("k" + std::to_string(*row.report.localized_spring)).c_str() : "-",
                  row.report.severity_estimate ? std::to_string(*row.report.severity_estimate).c_str() : "-",
                  max_di, row.pass ? "pass" : "FAIL");
    out += buf;
  }
  return out;
}

} // namespace subvarx
