#include "subvarx/simulate.hpp"

#include <cmath>
#include <random>
#include <string>

namespace subvarx {

namespace {

constexpr std::uint64_t noise_stream_offset = 0x9e3779b97f4a7c15ull;

} // namespace

void validate(const SimConfig &config) {
  if (!(config.ts > 0.0))
    throw ConfigError("ts = " + std::to_string(config.ts) + ": must be strictly positive");
  if (config.substep_ratio < 1)
    throw ConfigError("substep_ratio = " + std::to_string(config.substep_ratio) + ": must be at least 1");
  if (!(config.duration >= 3.0 * config.ts))
    throw ConfigError("duration = " + std::to_string(config.duration) + ": must cover at least 3 samples of ts = " +
                      std::to_string(config.ts));
  if (!(config.force_std > 0.0))
    throw ConfigError("force_std = " + std::to_string(config.force_std) + ": must be strictly positive");
  if (config.measurement_noise_std < 0.0)
    throw ConfigError("measurement_noise_std = " + std::to_string(config.measurement_noise_std) +
                      ": must be non-negative");
}

long output_sample_count(const SimConfig &config) {
  validate(config);
  return std::llround(config.duration / config.ts) + 1;
}

ForceRecord generate_excitation(const SimConfig &config, int dof) {
  validate(config);
  if (dof < 1)
    throw IndexOutOfRange("excitation DOF " + std::to_string(dof) + " must be >= 1");
  const long steps = (output_sample_count(config) - 1) * config.substep_ratio;
  std::mt19937_64 rng(config.seed);
  std::normal_distribution<double> gauss(0.0, config.force_std);
  ForceRecord record;
  record.samples.resize(steps);
  for (long n = 0; n < steps; ++n)
    record.samples[n] = gauss(rng);
  record.dof = dof;
  record.dt = config.step();
  record.seed = config.seed;
  return record;
}

DisplacementRecord simulate(const ChainModel &model, const ForceRecord &force, const SimConfig &config) {
  validate(config);
  if (force.dof < 1 || force.dof > model.dof_count())
    throw IndexOutOfRange("excitation DOF " + std::to_string(force.dof) + " outside the chain's 1.." +
                          std::to_string(model.dof_count()));

  const double h = config.step();
  const double bound = max_frequency_bound(model);
  if (!(h < 2.0 / bound))
    throw StabilityViolation(h, bound, 2.0 / bound);

  const long expected_steps = (output_sample_count(config) - 1) * config.substep_ratio;
  if (force.samples.size() != expected_steps)
    throw LengthMismatch("force record has " + std::to_string(force.samples.size()) + " samples, integration needs " +
                         std::to_string(expected_steps));

  const int n = model.dof_count();
  const long rows = output_sample_count(config);
  const Eigen::VectorXd inv_mass = model.masses.cwiseInverse();
  const Eigen::MatrixXd stiffness = assemble_matrices(model).stiffness;
  const double h2 = h * h;

  DisplacementRecord record;
  record.data = Eigen::MatrixXd::Zero(rows, n);
  record.dt = config.ts;
  record.dof_labels.resize(n);
  for (int j = 0; j < n; ++j)
    record.dof_labels[j] = j + 1;

  // Central differences from rest: row 0 is the zero state, force sample
  // f(n) advances z(n) -> z(n+1) on the fine grid, and every
  // substep_ratio-th fine state lands on an output row.
  Eigen::VectorXd prev = Eigen::VectorXd::Zero(n);
  Eigen::VectorXd cur = Eigen::VectorXd::Zero(n);
  Eigen::VectorXd next(n);
  Eigen::VectorXd applied = Eigen::VectorXd::Zero(n);
  long out_row = 1;
  for (long step = 0; step < expected_steps; ++step) {
    applied[force.dof - 1] = force.samples[step];
    if (step == 0) {
      next = 0.5 * h2 * inv_mass.cwiseProduct(applied);
    } else {
      next = 2.0 * cur - prev + h2 * inv_mass.cwiseProduct(applied - stiffness * cur);
    }
    prev.swap(cur);
    cur.swap(next);
    if ((step + 1) % config.substep_ratio == 0)
      record.data.row(out_row++) = cur.transpose();
  }

  if (config.measurement_noise_std > 0.0) {
    std::mt19937_64 rng(config.seed ^ noise_stream_offset);
    std::normal_distribution<double> gauss(0.0, config.measurement_noise_std);
    for (long i = 1; i < rows; ++i)
      for (int j = 0; j < n; ++j)
        record.data(i, j) += gauss(rng);
  }
  return record;
}

SubstructureSignals extract_substructure_signals(const DisplacementRecord &record, const SubstructureSpec &spec) {
  if (spec.upper_interface - spec.lower_interface < 2)
    throw InvalidSpec("substructure needs at least one internal DOF between interfaces " +
                      std::to_string(spec.lower_interface) + " and " + std::to_string(spec.upper_interface));
  auto column_of = [&](int dof) {
    for (std::size_t j = 0; j < record.dof_labels.size(); ++j)
      if (record.dof_labels[j] == dof)
        return static_cast<int>(j);
    throw MissingChannel("DOF " + std::to_string(dof) + " not present in the displacement record");
  };

  const int q = spec.internal_count();
  const long rows = record.sample_count();
  SubstructureSignals out;
  out.endogenous.data.resize(rows, q);
  out.endogenous.dt = record.dt;
  out.endogenous.dof_labels = spec.internal_dofs();
  for (int r = 0; r < q; ++r)
    out.endogenous.data.col(r) = record.data.col(column_of(spec.lower_interface + 1 + r));
  out.exogenous.data.resize(rows, 2);
  out.exogenous.dt = record.dt;
  out.exogenous.dof_labels = {spec.lower_interface, spec.upper_interface};
  out.exogenous.data.col(0) = record.data.col(column_of(spec.lower_interface));
  out.exogenous.data.col(1) = record.data.col(column_of(spec.upper_interface));
  return out;
}

} // namespace subvarx
