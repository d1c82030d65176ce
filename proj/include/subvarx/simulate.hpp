#pragma once

#include <Eigen/Dense>

#include <cstdint>
#include <vector>

#include "subvarx/chain_model.hpp"

namespace subvarx {

/// Simulation knobs. The integrator advances at ts / substep_ratio and the
/// output is decimated back to period ts, so substep_ratio = 1 puts the
/// sample grid and the integration grid on top of each other.
struct SimConfig {
  double ts = 1e-3;       // output sample period, s
  int substep_ratio = 1;  // integration substeps per output sample
  double duration = 20.0; // simulated time, s
  double force_std = 1.0; // excitation standard deviation, N
  std::uint64_t seed = 0;
  double measurement_noise_std = 0.0; // m, 0 disables

  double step() const { return ts / substep_ratio; }
};

/// Throws ConfigError naming the offending field.
void validate(const SimConfig &config);

/// Sampled force history applied at a single DOF.
struct ForceRecord {
  Eigen::VectorXd samples; // N, one per integration substep
  int dof = 0;             // excited DOF, 1-based
  double dt = 0.0;         // sample period, s
  std::uint64_t seed = 0;  // generator seed, kept for provenance
};

/// Sampled displacement history for a set of DOFs.
struct DisplacementRecord {
  Eigen::MatrixXd data;        // samples x channels, m
  double dt = 0.0;             // sample period, s
  std::vector<int> dof_labels; // global DOF index per column

  long sample_count() const { return data.rows(); }
  int channel_count() const { return static_cast<int>(data.cols()); }
};

/// Number of output samples a simulation of `config` produces (t = 0 included).
long output_sample_count(const SimConfig &config);

/// Seeded zero-mean Gaussian white noise at period ts / substep_ratio.
/// The same seed reproduces the sequence bit for bit.
ForceRecord generate_excitation(const SimConfig &config, int dof);

/// Integrates the undamped chain M z'' = F - K z by explicit central
/// differences from rest, then decimates to the output period. Measurement
/// noise, when enabled, is drawn from a separate stream derived from the
/// seed and added to the decimated output only.
/// Throws StabilityViolation unless step < 2 / max_frequency_bound(model).
DisplacementRecord simulate(const ChainModel &model, const ForceRecord &force, const SimConfig &config);

struct SubstructureSignals {
  DisplacementRecord endogenous; // internal DOFs, ascending
  DisplacementRecord exogenous;  // [lower_interface, upper_interface]
};

/// Selects substructure channels by DOF label, independent of column order.
SubstructureSignals extract_substructure_signals(const DisplacementRecord &record,
                                                 const SubstructureSpec &spec);

} // namespace subvarx
