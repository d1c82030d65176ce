#include "subvarx/chain_model.hpp"

#include <cmath>
#include <string>

namespace subvarx {

namespace {

void check_positive(const Eigen::VectorXd &values, const char *sequence) {
  for (int j = 0; j < values.size(); ++j)
    if (!(values[j] > 0.0))
      throw NonPositiveParameter(sequence, j + 1, values[j]);
}

} // namespace

ChainModel build_chain(const Eigen::VectorXd &masses, const Eigen::VectorXd &stiffnesses) {
  if (masses.size() != stiffnesses.size())
    throw LengthMismatch("masses has " + std::to_string(masses.size()) + " entries but stiffnesses has " +
                         std::to_string(stiffnesses.size()));
  if (masses.size() < 2)
    throw InvalidModel("a chain needs at least 2 DOFs, got " + std::to_string(masses.size()));
  check_positive(masses, "masses");
  check_positive(stiffnesses, "stiffnesses");
  return ChainModel{masses, stiffnesses};
}

ChainModel apply_damage(const ChainModel &model, int spring_index, double severity) {
  if (spring_index < 1 || spring_index > model.dof_count())
    throw IndexOutOfRange("spring index " + std::to_string(spring_index) + " outside [1, " +
                          std::to_string(model.dof_count()) + "]");
  if (!(severity >= 0.0) || severity >= 1.0)
    throw SeverityOutOfRange("severity " + std::to_string(severity) + " outside [0, 1)");
  ChainModel damaged = model;
  damaged.stiffnesses[spring_index - 1] *= 1.0 - severity;
  return damaged;
}

AssembledMatrices assemble_matrices(const ChainModel &model) {
  const int n = model.dof_count();
  AssembledMatrices out;
  out.mass = Eigen::MatrixXd::Zero(n, n);
  out.stiffness = Eigen::MatrixXd::Zero(n, n);
  for (int j = 0; j < n; ++j) {
    out.mass(j, j) = model.masses[j];
    const double upper = j + 1 < n ? model.stiffnesses[j + 1] : 0.0;
    out.stiffness(j, j) = model.stiffnesses[j] + upper;
    if (j + 1 < n) {
      out.stiffness(j, j + 1) = -model.stiffnesses[j + 1];
      out.stiffness(j + 1, j) = -model.stiffnesses[j + 1];
    }
  }
  return out;
}

double max_frequency_bound(const ChainModel &model) {
  const int n = model.dof_count();
  double worst = 0.0;
  for (int j = 0; j < n; ++j) {
    const double upper = j + 1 < n ? model.stiffnesses[j + 1] : 0.0;
    worst = std::max(worst, (model.stiffnesses[j] + upper) / model.masses[j]);
  }
  return std::sqrt(2.0 * worst);
}

void validate_substructure(const ChainModel &model, const SubstructureSpec &spec) {
  if (spec.lower_interface < 1)
    throw InvalidSpec("lower_interface " + std::to_string(spec.lower_interface) + " must be >= 1");
  if (spec.upper_interface > model.dof_count())
    throw InvalidSpec("upper_interface " + std::to_string(spec.upper_interface) + " exceeds the chain's " +
                      std::to_string(model.dof_count()) + " DOFs");
  if (spec.upper_interface - spec.lower_interface < 2)
    throw InvalidSpec("substructure needs at least one internal DOF between interfaces " +
                      std::to_string(spec.lower_interface) + " and " + std::to_string(spec.upper_interface));
}

} // namespace subvarx
