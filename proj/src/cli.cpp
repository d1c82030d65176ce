#include "subvarx/cli.hpp"

#include <CLI11.hpp>

#include <functional>
#include <iostream>

#include "subvarx/io.hpp"

namespace subvarx {

namespace {

CliConfig stock_config() {
  CliConfig config;
  config.chain = build_chain(Eigen::VectorXd::Constant(8, 100.0), Eigen::VectorXd::Constant(8, 1e6));
  config.substructure = {2, 6};
  config.sim = SimConfig{};
  config.excitation_dof = 8;
  config.severities = {0.05, 0.10, 0.20};
  return config;
}

void apply_config_file(CliConfig &config, const std::filesystem::path &path) {
  const nlohmann::json doc = load_json(path);
  try {
    if (doc.contains("chain"))
      config.chain = chain_from_json(doc["chain"]);
    if (doc.contains("substructure")) {
      config.substructure.lower_interface = doc["substructure"].at("lower_interface").get<int>();
      config.substructure.upper_interface = doc["substructure"].at("upper_interface").get<int>();
    }
    if (doc.contains("sim")) {
      const nlohmann::json &sim = doc["sim"];
      if (sim.contains("ts"))
        config.sim.ts = sim["ts"].get<double>();
      if (sim.contains("substep_ratio"))
        config.sim.substep_ratio = sim["substep_ratio"].get<int>();
      if (sim.contains("duration"))
        config.sim.duration = sim["duration"].get<double>();
      if (sim.contains("force_std"))
        config.sim.force_std = sim["force_std"].get<double>();
      if (sim.contains("seed"))
        config.sim.seed = sim["seed"].get<std::uint64_t>();
      if (sim.contains("measurement_noise_std"))
        config.sim.measurement_noise_std = sim["measurement_noise_std"].get<double>();
    }
    if (doc.contains("excitation_dof"))
      config.excitation_dof = doc["excitation_dof"].get<int>();
    if (doc.contains("severities"))
      config.severities = doc["severities"].get<std::vector<double>>();
    if (doc.contains("base_seed"))
      config.base_seed = doc["base_seed"].get<std::uint64_t>();
    if (doc.contains("mode"))
      config.mode = suite_mode_from_string(doc["mode"].get<std::string>());
    if (doc.contains("calibration_runs"))
      config.calibration_runs = doc["calibration_runs"].get<int>();
    if (doc.contains("expectations")) {
      for (const auto &[name, entry] : doc["expectations"].items()) {
        ExpectationOverride expectation;
        expectation.verdict = verdict_from_string(entry.at("verdict").get<std::string>());
        if (entry.contains("spring") && !entry["spring"].is_null()) {
          const std::string label = entry["spring"].get<std::string>();
          if (label.size() < 2 || label[0] != 'k')
            throw ConfigError("expectations." + name + ".spring: malformed label '" + label + "'");
          expectation.spring = std::stoi(label.substr(1));
        }
        if (expectation.verdict == Verdict::damaged && !expectation.spring)
          throw ConfigError("expectations." + name + ": a damaged expectation needs a spring label");
        config.expectations[name] = expectation;
      }
    }
  } catch (const nlohmann::json::exception &error) {
    throw ConfigError(path.string() + ": " + error.what());
  }
}

std::vector<DamageIndicators> calibration_runs_from_file(const std::filesystem::path &path) {
  const nlohmann::json doc = load_json(path);
  if (!doc.is_array())
    throw ConfigError(path.string() + ": expected an array of per-run DI maps");
  std::vector<DamageIndicators> runs;
  try {
    for (const nlohmann::json &entry : doc) {
      DamageIndicators run;
      for (const auto &[name, di] : entry.items())
        run.values[parse_element_name(name)] = di.get<double>();
      runs.push_back(std::move(run));
    }
  } catch (const nlohmann::json::exception &error) {
    throw ConfigError(path.string() + ": " + error.what());
  }
  return runs;
}

int cmd_truth(const CliConfig &config, const std::filesystem::path &out) {
  const VarxModel truth = ground_truth_varx(config.chain, config.substructure, config.sim.ts);
  write_text(out, varx_to_json(truth).dump(2) + "\n");
  std::cout << "wrote ground-truth model to " << out.string() << "\n";
  return exit_code::ok;
}

int cmd_simulate(const CliConfig &config, const std::filesystem::path &out,
                 const std::filesystem::path &force_out) {
  const ForceRecord force = generate_excitation(config.sim, config.excitation_dof);
  const DisplacementRecord record = simulate(config.chain, force, config.sim);
  write_displacement_csv(out, record);
  if (!force_out.empty())
    write_force_csv(force_out, force);
  std::cout << "wrote " << record.sample_count() << " samples x " << record.channel_count() << " DOFs to "
            << out.string() << "\n";
  return exit_code::ok;
}

int cmd_estimate(const CliConfig &config, const std::filesystem::path &data, const std::filesystem::path &out) {
  const DisplacementRecord record = read_displacement_csv(data);
  const SubstructureSignals signals = extract_substructure_signals(record, config.substructure);
  const Estimate estimate = estimate_varx(signals.endogenous, signals.exogenous);
  nlohmann::json doc = varx_to_json(estimate.model);
  doc["diagnostics"] = diagnostics_to_json(estimate.diagnostics);
  write_text(out, doc.dump(2) + "\n");
  std::cout << "estimated VARX model from " << estimate.diagnostics.samples_used << " samples, condition "
            << estimate.diagnostics.condition_indicator << ", written to " << out.string() << "\n";
  return exit_code::ok;
}

int cmd_analyze(const std::filesystem::path &current_path, const std::filesystem::path &baseline_path,
                std::optional<double> threshold, const std::filesystem::path &calibration_path,
                const std::filesystem::path &out) {
  const VarxModel current = varx_from_json(load_json(current_path));
  const VarxModel baseline = varx_from_json(load_json(baseline_path));

  if (threshold.has_value() == !calibration_path.empty())
    throw ConfigError("analyze needs exactly one of --threshold or --calibration");
  const double tau =
      threshold ? *threshold : calibrate_threshold(calibration_runs_from_file(calibration_path));

  const DamageIndicators indicators = damage_indicators(current, baseline);
  DamageReport report = localize(indicators, tau, baseline.dimension());
  if (report.verdict == Verdict::damaged)
    report.severity_estimate = estimate_severity(current, baseline, *report.localized_spring);
  write_text(out, report_to_json(report).dump(2) + "\n");
  std::cout << "verdict: " << to_string(report.verdict);
  if (report.localized_spring)
    std::cout << ", spring k" << *report.localized_spring << ", severity " << *report.severity_estimate;
  std::cout << " (report written to " << out.string() << ")\n";
  return exit_code::ok;
}

int cmd_suite(const CliConfig &config, const std::filesystem::path &out, const std::filesystem::path &table_out,
              unsigned jobs) {
  SuiteDefinition definition;
  definition.chain = config.chain;
  definition.substructure = config.substructure;
  definition.excitation_dof = config.excitation_dof;
  definition.sim = config.sim;
  definition.severities = config.severities;
  definition.base_seed = config.base_seed;
  definition.mode = config.mode;

  std::vector<ScenarioSpec> scenarios = build_suite(definition);
  for (ScenarioSpec &scenario : scenarios) {
    const auto it = config.expectations.find(scenario.name);
    if (it == config.expectations.end())
      continue;
    scenario.expected_verdict = it->second.verdict;
    scenario.expected_spring = it->second.spring;
  }

  const SuiteResult result = run_suite(scenarios, config.calibration_runs, jobs);
  const std::string table = emit_report(result, ReportFormat::table);
  write_text(table_out, table);
  write_text(out, emit_report(result, ReportFormat::structured));

  std::cout << table;
  long passed = 0;
  for (const ScenarioRow &row : result.rows)
    passed += row.pass ? 1 : 0;
  std::cout << "suite (" << to_string(config.mode) << "): " << passed << "/" << result.rows.size()
            << " scenarios pass, threshold " << result.threshold << "\n";
  return result.all_pass() ? exit_code::ok : exit_code::suite_failure;
}

int run_checked(const std::function<int()> &body) {
  try {
    return body();
  } catch (const StabilityViolation &error) {
    std::cerr << "error: " << error.what() << "\n";
    return exit_code::stability;
  } catch (const RankDeficient &error) {
    std::cerr << "error: " << error.what() << "\n";
    return exit_code::estimation;
  } catch (const TooFewSamples &error) {
    std::cerr << "error: " << error.what() << "\n";
    return exit_code::estimation;
  } catch (const std::exception &error) {
    std::cerr << "error: " << error.what() << "\n";
    return exit_code::config;
  }
}

} // namespace

CliConfig load_cli_config(const std::filesystem::path &path, const CliOverrides &overrides) {
  CliConfig config = stock_config();
  if (!path.empty())
    apply_config_file(config, path);
  if (overrides.seed) {
    config.base_seed = *overrides.seed;
    config.sim.seed = *overrides.seed;
  }
  if (overrides.mode)
    config.mode = *overrides.mode;

  validate(config.sim);
  validate_substructure(config.chain, config.substructure);
  if (config.excitation_dof < 1 || config.excitation_dof > config.chain.dof_count())
    throw ConfigError("excitation_dof = " + std::to_string(config.excitation_dof) + ": outside the chain's 1.." +
                      std::to_string(config.chain.dof_count()));
  for (double severity : config.severities)
    if (!(severity > 0.0) || severity >= 1.0)
      throw ConfigError("severities must lie in (0, 1), got " + std::to_string(severity));
  if (config.calibration_runs < 1)
    throw ConfigError("calibration_runs = " + std::to_string(config.calibration_runs) + ": must be positive");
  return config;
}

int run_cli(const std::vector<std::string> &args) {
  CLI::App app{"substructure VARX damage detection pipeline"};
  app.require_subcommand(1);

  std::string config_path;
  std::uint64_t seed = 0;
  std::string mode_text;

  auto add_common = [&](CLI::App *cmd, bool with_seed, bool with_mode) {
    cmd->add_option("--config", config_path, "configuration file (JSON); defaults cover the stock 8-DOF chain");
    CLI::Option *seed_opt = nullptr;
    CLI::Option *mode_opt = nullptr;
    if (with_seed)
      seed_opt = cmd->add_option("--seed", seed, "override the configured seed");
    if (with_mode)
      mode_opt = cmd->add_option("--mode", mode_text, "suite mode")->check(CLI::IsMember({"exact", "realistic"}));
    return std::pair{seed_opt, mode_opt};
  };

  std::string truth_out = "varx_truth.json";
  CLI::App *truth = app.add_subcommand("truth", "write the analytic VARX model of the configured substructure");
  add_common(truth, false, false);
  truth->add_option("--out", truth_out, "output model path")->capture_default_str();

  std::string sim_out = "displacements.csv";
  std::string force_out;
  CLI::App *sim = app.add_subcommand("simulate", "simulate the chain and write the displacement CSV");
  CLI::Option *sim_seed = add_common(sim, true, false).first;
  sim->add_option("--out", sim_out, "output displacement CSV path")->capture_default_str();
  sim->add_option("--force-out", force_out, "also write the excitation force CSV");

  std::string est_data;
  std::string est_out = "varx_estimate.json";
  CLI::App *est = app.add_subcommand("estimate", "estimate the substructure VARX model from a displacement CSV");
  add_common(est, false, false);
  est->add_option("--data", est_data, "input displacement CSV")->required();
  est->add_option("--out", est_out, "output model path")->capture_default_str();

  std::string current_path;
  std::string baseline_path;
  std::string calibration_path;
  double threshold = 0.0;
  std::string analyze_out = "damage_report.json";
  CLI::App *analyze = app.add_subcommand("analyze", "compare a model against a healthy baseline");
  add_common(analyze, false, false);
  analyze->add_option("--current", current_path, "current model (JSON)")->required();
  analyze->add_option("--baseline", baseline_path, "healthy baseline model (JSON)")->required();
  CLI::Option *threshold_opt = analyze->add_option("--threshold", threshold, "detection threshold");
  analyze->add_option("--calibration", calibration_path, "healthy DI runs (JSON array) to calibrate the threshold");
  analyze->add_option("--out", analyze_out, "output report path")->capture_default_str();

  std::string suite_out = "suite_result.json";
  std::string table_out = "suite_table.csv";
  unsigned jobs = 0;
  CLI::App *suite = app.add_subcommand("suite", "run the full scenario grid and write both reports");
  auto [suite_seed, suite_mode] = add_common(suite, true, true);
  suite->add_option("--out", suite_out, "structured report path")->capture_default_str();
  suite->add_option("--table-out", table_out, "table report path")->capture_default_str();
  suite->add_option("--jobs", jobs, "scenario parallelism (0 = hardware threads)")->capture_default_str();

  std::vector<const char *> argv;
  argv.reserve(args.size() + 1);
  argv.push_back("subvarx");
  for (const std::string &arg : args)
    argv.push_back(arg.c_str());
  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::ParseError &error) {
    const int rc = app.exit(error);
    return rc == 0 ? exit_code::ok : exit_code::config;
  }

  return run_checked([&]() -> int {
    CliOverrides overrides;
    if ((sim_seed && sim_seed->count()) || (suite_seed && suite_seed->count()))
      overrides.seed = seed;
    if (suite_mode && suite_mode->count())
      overrides.mode = suite_mode_from_string(mode_text);
    const CliConfig config = load_cli_config(config_path, overrides);

    if (app.got_subcommand(truth))
      return cmd_truth(config, truth_out);
    if (app.got_subcommand(sim))
      return cmd_simulate(config, sim_out, force_out);
    if (app.got_subcommand(est))
      return cmd_estimate(config, est_data, est_out);
    if (app.got_subcommand(analyze))
      return cmd_analyze(current_path, baseline_path,
                         threshold_opt->count() ? std::optional<double>(threshold) : std::nullopt,
                         calibration_path, analyze_out);
    return cmd_suite(config, suite_out, table_out, jobs);
  });
}

} // namespace subvarx
