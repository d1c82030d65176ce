#pragma once

#include <Eigen/Dense>

#include <vector>

#include "subvarx/errors.hpp"

namespace subvarx {

/// Ground-anchored shear chain: DOF j carries mass m_j and spring j couples
/// DOF j-1 (ground, for j = 1) to DOF j. Indices are 1-based bottom-to-top;
/// the top DOF has no spring above it. Immutable after build_chain.
struct ChainModel {
  Eigen::VectorXd masses;      // kg, entry j-1 holds m_j
  Eigen::VectorXd stiffnesses; // N/m, entry j-1 holds k_j

  int dof_count() const { return static_cast<int>(masses.size()); }
};

/// One substructure window over a chain: the two interface DOFs are measured
/// inputs, the DOFs strictly between them are the modeled internal channels.
struct SubstructureSpec {
  int lower_interface = 0; // 1-based DOF index
  int upper_interface = 0; // 1-based DOF index, at least lower_interface + 2

  int internal_count() const { return upper_interface - lower_interface - 1; }

  std::vector<int> internal_dofs() const {
    std::vector<int> dofs;
    for (int g = lower_interface + 1; g < upper_interface; ++g)
      dofs.push_back(g);
    return dofs;
  }
};

/// Validates and assembles a chain. Throws LengthMismatch when the sequences
/// differ in length, InvalidModel for fewer than two DOFs, and
/// NonPositiveParameter (with 1-based index) for any non-positive entry.
ChainModel build_chain(const Eigen::VectorXd &masses, const Eigen::VectorXd &stiffnesses);

/// Returns a copy with stiffness `spring_index` scaled by (1 - severity).
/// severity must lie in [0, 1); spring_index is 1-based.
ChainModel apply_damage(const ChainModel &model, int spring_index, double severity);

struct AssembledMatrices {
  Eigen::MatrixXd mass;      // diagonal
  Eigen::MatrixXd stiffness; // tridiagonal
};

/// Full-chain mass and stiffness matrices: M(j,j) = m_j,
/// K(j,j) = k_j + k_{j+1} (k_{N+1} = 0), K(j,j+1) = K(j+1,j) = -k_{j+1}.
AssembledMatrices assemble_matrices(const ChainModel &model);

/// Conservative upper bound on the largest undamped natural frequency (rad/s),
/// via the Gershgorin enclosure lambda_max(M^-1 K) <= 2 max_j (k_j + k_{j+1}) / m_j.
double max_frequency_bound(const ChainModel &model);

/// Throws InvalidSpec when the window does not satisfy
/// 1 <= lower_interface, upper_interface <= N, upper - lower >= 2.
void validate_substructure(const ChainModel &model, const SubstructureSpec &spec);

} // namespace subvarx
