#pragma once

#include <cmath>
#include <cstdint>

#include <Eigen/Dense>

#include <subvarx/chain_model.hpp>
#include <subvarx/estimate.hpp>
#include <subvarx/simulate.hpp>
#include <subvarx/varx_model.hpp>

namespace testutil {

/// The 8-story reference setup: 100 kg floors, 1e6 N/m springs, substructure
/// between interface DOFs 2 and 6, excitation at the top floor.
inline subvarx::ChainModel reference_chain() {
  return subvarx::build_chain(Eigen::VectorXd::Constant(8, 100.0), Eigen::VectorXd::Constant(8, 1.0e6));
}

inline subvarx::SubstructureSpec reference_substructure() { return {2, 6}; }

inline constexpr int reference_excitation_dof = 8;

inline subvarx::SimConfig exact_config(std::uint64_t seed, double duration = 20.0) {
  subvarx::SimConfig config;
  config.seed = seed;
  config.duration = duration;
  return config;
}

inline subvarx::DisplacementRecord simulate_chain(const subvarx::ChainModel &chain,
                                                  const subvarx::SimConfig &config,
                                                  int dof = reference_excitation_dof) {
  return subvarx::simulate(chain, subvarx::generate_excitation(config, dof), config);
}

inline subvarx::Estimate estimate_chain(const subvarx::ChainModel &chain, const subvarx::SimConfig &config,
                                        const subvarx::SubstructureSpec &spec = reference_substructure()) {
  const subvarx::SubstructureSignals signals =
      subvarx::extract_substructure_signals(simulate_chain(chain, config), spec);
  return subvarx::estimate_varx(signals.endogenous, signals.exogenous);
}

/// max_ij |a - b| / max(1e-300, max_ij |b|): relative deviation on the scale
/// of the reference matrix, safe for matrices with structural zeros.
inline double max_rel_diff(const Eigen::MatrixXd &value, const Eigen::MatrixXd &reference) {
  const double scale = std::max(1e-300, reference.cwiseAbs().maxCoeff());
  return (value - reference).cwiseAbs().maxCoeff() / scale;
}

inline bool bit_equal(const Eigen::MatrixXd &a, const Eigen::MatrixXd &b) {
  return a.rows() == b.rows() && a.cols() == b.cols() && (a.array() == b.array()).all();
}

} // namespace testutil
