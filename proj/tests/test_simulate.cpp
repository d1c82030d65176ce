#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <string>

#include <subvarx/simulate.hpp>
#include <subvarx/varx_model.hpp>

#include "helpers.hpp"

using namespace subvarx;

namespace {

bool mentions(const Error &error, const std::string &needle) {
  return std::string(error.what()).find(needle) != std::string::npos;
}

} // namespace

TEST_CASE("validate rejects each bad SimConfig field by name") {
  SimConfig config;
  CHECK_NOTHROW(validate(config));

  auto expect_config_error = [](SimConfig bad, const std::string &field) {
    try {
      validate(bad);
      FAIL("expected ConfigError for " << field);
    } catch (const ConfigError &error) {
      CHECK(mentions(error, field));
    }
  };

  SimConfig bad = config;
  bad.ts = 0.0;
  expect_config_error(bad, "ts");
  bad = config;
  bad.substep_ratio = 0;
  expect_config_error(bad, "substep_ratio");
  bad = config;
  bad.duration = 2e-3; // below three samples
  expect_config_error(bad, "duration");
  bad = config;
  bad.force_std = 0.0;
  expect_config_error(bad, "force_std");
  bad = config;
  bad.measurement_noise_std = -1.0;
  expect_config_error(bad, "measurement_noise_std");
}

TEST_CASE("output_sample_count includes the t = 0 sample") {
  CHECK(output_sample_count(testutil::exact_config(0)) == 20001);
  SimConfig config = testutil::exact_config(0, 2.0);
  config.substep_ratio = 10;
  CHECK(output_sample_count(config) == 2001);
}

TEST_CASE("generate_excitation is seeded white noise on the integration grid") {
  SimConfig config = testutil::exact_config(42);
  config.substep_ratio = 10;
  const ForceRecord first = generate_excitation(config, 8);
  const ForceRecord second = generate_excitation(config, 8);

  CHECK(first.samples.size() == 200000);
  CHECK(first.dt == config.ts / 10);
  CHECK(first.dof == 8);
  CHECK(first.seed == 42);
  CHECK(testutil::bit_equal(first.samples, second.samples));

  SimConfig other = config;
  other.seed = 43;
  CHECK_FALSE(testutil::bit_equal(generate_excitation(other, 8).samples, first.samples));

  SimConfig longer = testutil::exact_config(9, 1000.0);
  const ForceRecord big = generate_excitation(longer, 8);
  REQUIRE(big.samples.size() == 1000000);
  const double mean = big.samples.mean();
  const double sd = std::sqrt((big.samples.array() - mean).square().mean());
  CHECK(std::abs(mean) < 5e-3);
  CHECK(sd == doctest::Approx(1.0).epsilon(0.01));
}

TEST_CASE("simulate starts from rest and bootstraps the first step") {
  const ChainModel chain = testutil::reference_chain();
  const SimConfig config = testutil::exact_config(3, 0.5);
  const ForceRecord force = generate_excitation(config, 8);
  const DisplacementRecord record = simulate(chain, force, config);

  CHECK(record.sample_count() == 501);
  CHECK(record.channel_count() == 8);
  CHECK(record.dt == config.ts);
  CHECK(record.dof_labels == std::vector<int>{1, 2, 3, 4, 5, 6, 7, 8});
  CHECK(record.data.row(0).cwiseAbs().maxCoeff() == 0.0);

  const double h = config.step();
  const double expected = 0.5 * h * h * force.samples(0) / chain.masses(7);
  CHECK(record.data(1, 7) == doctest::Approx(expected).epsilon(1e-14));
  for (int j = 0; j < 7; ++j)
    CHECK(record.data(1, j) == 0.0);
}

TEST_CASE("simulate at equilibrium stays exactly at rest") {
  const ChainModel chain = testutil::reference_chain();
  const SimConfig config = testutil::exact_config(0, 0.1);
  ForceRecord force = generate_excitation(config, 8);
  force.samples.setZero();
  const DisplacementRecord record = simulate(chain, force, config);
  CHECK(record.data.cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("simulate enforces the strict stability limit") {
  const ChainModel chain = testutil::reference_chain();
  SimConfig config = testutil::exact_config(0, 1.0);
  config.ts = 1e-2; // exactly 2 / bound: still rejected
  try {
    simulate(chain, generate_excitation(config, 8), config);
    FAIL("expected StabilityViolation");
  } catch (const StabilityViolation &error) {
    CHECK(error.step() == 1e-2);
    CHECK(error.frequency_bound() == doctest::Approx(200.0).epsilon(1e-12));
    CHECK(error.max_stable_step() == doctest::Approx(1e-2).epsilon(1e-12));
    CHECK(mentions(error, "substep_ratio"));
  }

  config.substep_ratio = 2; // halves the step, now stable
  CHECK_NOTHROW(simulate(chain, generate_excitation(config, 8), config));
}

TEST_CASE("simulate rejects a force history on the wrong grid") {
  const ChainModel chain = testutil::reference_chain();
  const SimConfig config = testutil::exact_config(0, 0.5);
  SimConfig finer = config;
  finer.substep_ratio = 10;
  CHECK_THROWS_AS(simulate(chain, generate_excitation(finer, 8), config), LengthMismatch);
}

TEST_CASE("simulate is deterministic and linear in the force") {
  const ChainModel chain = testutil::reference_chain();
  const SimConfig config = testutil::exact_config(11, 1.0);
  const ForceRecord force = generate_excitation(config, 8);

  const DisplacementRecord once = simulate(chain, force, config);
  const DisplacementRecord twice = simulate(chain, force, config);
  CHECK(testutil::bit_equal(once.data, twice.data));

  ForceRecord quadrupled = force;
  quadrupled.samples *= 4.0; // power of two: scaling commutes with rounding
  const DisplacementRecord scaled4 = simulate(chain, quadrupled, config);
  CHECK(testutil::bit_equal(scaled4.data, 4.0 * once.data));

  ForceRecord tripled = force;
  tripled.samples *= 3.0;
  const DisplacementRecord scaled3 = simulate(chain, tripled, config);
  CHECK(testutil::max_rel_diff(scaled3.data, 3.0 * once.data) < 1e-12);
}

TEST_CASE("decimated output equals the fine-grid run sampled every ratio-th step") {
  const ChainModel chain = testutil::reference_chain();
  SimConfig coarse = testutil::exact_config(17, 2.0);
  coarse.substep_ratio = 10;
  const ForceRecord force = generate_excitation(coarse, 8);

  SimConfig fine = coarse;
  fine.ts = coarse.step();
  fine.substep_ratio = 1;

  const DisplacementRecord decimated = simulate(chain, force, coarse);
  const DisplacementRecord full = simulate(chain, force, fine);

  REQUIRE(decimated.sample_count() == 2001);
  REQUIRE(full.sample_count() == 20001);
  for (long i = 0; i < decimated.sample_count(); ++i)
    CHECK(testutil::bit_equal(decimated.data.row(i), full.data.row(10 * i)));
}

TEST_CASE("same-grid simulation satisfies the analytic difference equation") {
  const ChainModel chain = testutil::reference_chain();
  const SimConfig config = testutil::exact_config(5, 2.0);
  const DisplacementRecord record = testutil::simulate_chain(chain, config);
  const SubstructureSignals signals = extract_substructure_signals(record, testutil::reference_substructure());
  const VarxModel truth = ground_truth_varx(chain, testutil::reference_substructure(), config.ts);

  const Eigen::MatrixXd &z = signals.endogenous.data;
  const Eigen::MatrixXd &u = signals.exogenous.data;
  const double scale = z.cwiseAbs().maxCoeff();
  double worst = 0.0;
  for (long n = 2; n < z.rows(); ++n) {
    const Eigen::VectorXd predicted = truth.a1 * z.row(n - 1).transpose() +
                                      truth.a2 * z.row(n - 2).transpose() +
                                      truth.b1 * u.row(n - 1).transpose();
    worst = std::max(worst, (z.row(n).transpose() - predicted).cwiseAbs().maxCoeff());
  }
  CHECK(worst <= 1e-10 * scale);
}

TEST_CASE("measurement noise is reproducible and leaves the initial sample clean") {
  const ChainModel chain = testutil::reference_chain();
  SimConfig config = testutil::exact_config(23, 2.0);
  const ForceRecord force = generate_excitation(config, 8);
  const DisplacementRecord clean = simulate(chain, force, config);

  SimConfig noisy_config = config;
  noisy_config.measurement_noise_std = 1e-9;
  const DisplacementRecord noisy = simulate(chain, force, noisy_config);
  const DisplacementRecord again = simulate(chain, force, noisy_config);

  CHECK(testutil::bit_equal(noisy.data, again.data));
  CHECK_FALSE(testutil::bit_equal(noisy.data, clean.data));
  CHECK(testutil::bit_equal(noisy.data.row(0), clean.data.row(0)));

  const Eigen::MatrixXd diff = (noisy.data - clean.data).bottomRows(noisy.sample_count() - 1);
  const double sd = std::sqrt(diff.array().square().mean());
  CHECK(sd == doctest::Approx(1e-9).epsilon(0.05));

  SimConfig reseeded = noisy_config;
  reseeded.seed = 24;
  const DisplacementRecord other_stream = simulate(chain, force, reseeded);
  CHECK_FALSE(testutil::bit_equal(other_stream.data, noisy.data));
}

TEST_CASE("extract_substructure_signals selects channels by label") {
  const ChainModel chain = testutil::reference_chain();
  const DisplacementRecord record = testutil::simulate_chain(chain, testutil::exact_config(1, 0.1));
  const SubstructureSignals signals = extract_substructure_signals(record, {2, 6});

  CHECK(signals.endogenous.dof_labels == std::vector<int>{3, 4, 5});
  CHECK(signals.exogenous.dof_labels == std::vector<int>{2, 6});
  CHECK(signals.endogenous.dt == record.dt);
  CHECK(testutil::bit_equal(signals.endogenous.data.col(0), record.data.col(2)));
  CHECK(testutil::bit_equal(signals.exogenous.data.col(1), record.data.col(5)));

  DisplacementRecord permuted;
  permuted.dt = record.dt;
  permuted.dof_labels = {8, 6, 4, 2, 7, 5, 3, 1};
  permuted.data.resize(record.sample_count(), 8);
  for (int c = 0; c < 8; ++c)
    permuted.data.col(c) = record.data.col(permuted.dof_labels[c] - 1);
  const SubstructureSignals reordered = extract_substructure_signals(permuted, {2, 6});
  CHECK(testutil::bit_equal(reordered.endogenous.data, signals.endogenous.data));
  CHECK(testutil::bit_equal(reordered.exogenous.data, signals.exogenous.data));
  CHECK(reordered.endogenous.dof_labels == signals.endogenous.dof_labels);

  CHECK_THROWS_AS(extract_substructure_signals(record, {6, 9}), MissingChannel);
}
