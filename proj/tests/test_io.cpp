#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <unistd.h>

#include <filesystem>
#include <string>
#include <vector>

#include <json.hpp>

#include <subvarx/io.hpp>

#include "helpers.hpp"

using namespace subvarx;
namespace fs = std::filesystem;

namespace {

struct TempDir {
  fs::path path;

  TempDir() {
    path = fs::temp_directory_path() / ("subvarx-io-" + std::to_string(::getpid()));
    fs::create_directories(path);
  }
  ~TempDir() { fs::remove_all(path); }

  fs::path file(const std::string &name) const { return path / name; }
};

DisplacementRecord awkward_record() {
  DisplacementRecord record;
  record.dt = 1e-3;
  record.dof_labels = {3, 4, 5};
  record.data.resize(7, 3);
  record.data << 0.0, 0.0, 0.0,
      0.1, 1.0 / 3.0, -2.5e-11,
      1.98, -0.1, 1e-300,
      -1.0 / 7.0, 2.0, 3.5e10,
      1e-15, -1e-15, 0.0,
      123.456789012345678, -9.87654321e-7, 4.0,
      0.5, 0.25, -0.125;
  return record;
}

VarxModel reference_truth() {
  return ground_truth_varx(testutil::reference_chain(), testutil::reference_substructure(), 1e-3);
}

} // namespace

TEST_CASE("displacement CSV round-trips every double bit for bit") {
  TempDir dir;
  const DisplacementRecord record = awkward_record();
  const fs::path path = dir.file("z.csv");
  write_displacement_csv(path, record);

  const std::string text = read_text(path);
  CHECK(text.rfind("t,z3,z4,z5\n", 0) == 0);

  const DisplacementRecord loaded = read_displacement_csv(path);
  CHECK(loaded.dt == record.dt);
  CHECK(loaded.dof_labels == record.dof_labels);
  CHECK(testutil::bit_equal(loaded.data, record.data));
}

TEST_CASE("displacement CSV rejects malformed input") {
  TempDir dir;

  CHECK_THROWS_AS(read_displacement_csv(dir.file("absent.csv")), IoError);

  const fs::path bad_header = dir.file("bad_header.csv");
  write_text(bad_header, "time,z3\n0,1\n0.001,2\n0.002,3\n");
  CHECK_THROWS_AS(read_displacement_csv(bad_header), IoError);

  const fs::path short_file = dir.file("short.csv");
  write_text(short_file, "t,z3\n0.0,1.0\n1e-3,2.0\n");
  CHECK_THROWS_AS(read_displacement_csv(short_file), TooFewSamples);

  const fs::path ragged = dir.file("ragged.csv");
  write_text(ragged, "t,z3,z4\n0,1,2\n1e-3,3\n2e-3,4,5\n");
  CHECK_THROWS_AS(read_displacement_csv(ragged), IoError);

  const fs::path garbage = dir.file("garbage.csv");
  write_text(garbage, "t,z3\n0,1\n1e-3,abc\n2e-3,3\n");
  CHECK_THROWS_AS(read_displacement_csv(garbage), IoError);

  const fs::path bad_label = dir.file("bad_label.csv");
  write_text(bad_label, "t,a\n0,1\n1e-3,2\n2e-3,3\n");
  CHECK_THROWS_AS(read_displacement_csv(bad_label), IoError);
}

TEST_CASE("force CSV round-trips") {
  TempDir dir;
  ForceRecord force;
  force.dt = 1e-4;
  force.samples.resize(5);
  force.samples << 0.5, -1.0 / 3.0, 2.25e-9, -4.0, 1e100;
  const fs::path path = dir.file("f.csv");
  write_force_csv(path, force);

  CHECK(read_text(path).rfind("t,f\n", 0) == 0);
  const ForceRecord loaded = read_force_csv(path);
  CHECK(loaded.dt == force.dt);
  CHECK(testutil::bit_equal(loaded.samples, force.samples));
}

TEST_CASE("chain JSON round-trips and validates") {
  const ChainModel chain = testutil::reference_chain();
  const nlohmann::json doc = chain_to_json(chain);
  const ChainModel loaded = chain_from_json(doc);
  CHECK(testutil::bit_equal(loaded.masses, chain.masses));
  CHECK(testutil::bit_equal(loaded.stiffnesses, chain.stiffnesses));

  nlohmann::json missing = doc;
  missing.erase("stiffnesses");
  CHECK_THROWS_AS(chain_from_json(missing), ConfigError);

  nlohmann::json negative = doc;
  negative["masses"][0] = -1.0;
  CHECK_THROWS_AS(chain_from_json(negative), NonPositiveParameter);
}

TEST_CASE("VARX model JSON round-trips and validates") {
  const VarxModel truth = reference_truth();
  const nlohmann::json doc = varx_to_json(truth);
  const VarxModel loaded = varx_from_json(doc);
  CHECK(testutil::bit_equal(loaded.a1, truth.a1));
  CHECK(testutil::bit_equal(loaded.a2, truth.a2));
  CHECK(testutil::bit_equal(loaded.b1, truth.b1));
  CHECK(loaded.ts == truth.ts);
  CHECK(loaded.endogenous_labels == truth.endogenous_labels);
  CHECK(loaded.exogenous_labels == truth.exogenous_labels);

  nlohmann::json bad = doc;
  bad["b1"] = nlohmann::json::array({{1.0, 2.0, 3.0}, {4.0, 5.0, 6.0}, {7.0, 8.0, 9.0}});
  CHECK_THROWS_AS(varx_from_json(bad), InvalidModel);

  bad = doc;
  bad["a1"][1] = nlohmann::json::array({1.0});
  CHECK_THROWS_AS(varx_from_json(bad), ConfigError);

  bad = doc;
  bad["ts"] = 0.0;
  CHECK_THROWS_AS(varx_from_json(bad), InvalidModel);

  bad = doc;
  bad["endogenous_labels"] = nlohmann::json::array({3, 4});
  CHECK_THROWS_AS(varx_from_json(bad), InvalidModel);

  bad = doc;
  bad.erase("a2");
  CHECK_THROWS_AS(varx_from_json(bad), ConfigError);
}

TEST_CASE("diagnostics JSON round-trips") {
  EstimationDiagnostics diagnostics;
  diagnostics.residual_rms.resize(3);
  diagnostics.residual_rms << 1e-12, 2.5e-13, 7e-14;
  diagnostics.condition_indicator = 1.4e4;
  diagnostics.samples_used = 19999;

  const EstimationDiagnostics loaded = diagnostics_from_json(diagnostics_to_json(diagnostics));
  CHECK(testutil::bit_equal(loaded.residual_rms, diagnostics.residual_rms));
  CHECK(loaded.condition_indicator == diagnostics.condition_indicator);
  CHECK(loaded.samples_used == diagnostics.samples_used);
}

TEST_CASE("damage report JSON carries named indicators") {
  const VarxModel truth = reference_truth();
  const VarxModel damaged =
      ground_truth_varx(apply_damage(testutil::reference_chain(), 4, 0.1), testutil::reference_substructure(), 1e-3);

  DamageReport report = localize(damage_indicators(damaged, truth), 1e-6, 3);
  report.severity_estimate = estimate_severity(damaged, truth, *report.localized_spring);
  const nlohmann::json doc = report_to_json(report);

  CHECK(doc.at("verdict") == "damaged");
  CHECK(doc.at("spring") == "k4");
  CHECK(doc.at("severity").get<double>() == doctest::Approx(0.1).epsilon(1e-12));
  CHECK(doc.at("threshold") == 1e-6);
  CHECK(doc.at("indicators").contains("A1(1,2)"));
  CHECK(doc.at("indicators").contains("B1(3,2)"));
  CHECK(doc.at("indicators").size() == 9);
  CHECK(doc.at("baseline_id") == model_digest(truth));

  const DamageReport loaded = report_from_json(doc);
  CHECK(loaded.verdict == report.verdict);
  CHECK(loaded.localized_spring == report.localized_spring);
  CHECK(loaded.severity_estimate == report.severity_estimate);
  CHECK(loaded.threshold == report.threshold);
  CHECK(loaded.indicators.values == report.indicators.values);

  DamageReport healthy = localize(damage_indicators(truth, truth), 1e-6, 3);
  const nlohmann::json healthy_doc = report_to_json(healthy);
  CHECK(healthy_doc.at("verdict") == "healthy");
  CHECK(healthy_doc.at("spring").is_null());
  CHECK(healthy_doc.at("severity").is_null());
  const DamageReport healthy_loaded = report_from_json(healthy_doc);
  CHECK(healthy_loaded.verdict == Verdict::healthy);
  CHECK_FALSE(healthy_loaded.localized_spring.has_value());
}

TEST_CASE("verdict strings round-trip") {
  for (Verdict verdict : {Verdict::healthy, Verdict::damaged, Verdict::inconclusive})
    CHECK(verdict_from_string(to_string(verdict)) == verdict);
  CHECK_THROWS_AS(verdict_from_string("fine"), InvalidSpec);
}

TEST_CASE("text and JSON file helpers") {
  TempDir dir;
  const fs::path path = dir.file("doc.json");
  write_text(path, "{\"a\": 1}\n");
  CHECK(read_text(path) == "{\"a\": 1}\n");
  CHECK(load_json(path).at("a") == 1);

  CHECK_THROWS_AS(read_text(dir.file("nope.txt")), IoError);
  write_text(path, "{not json");
  CHECK_THROWS_AS(load_json(path), ConfigError);
}
