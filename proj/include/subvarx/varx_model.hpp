#pragma once

#include <Eigen/Dense>

#include <vector>

#include "subvarx/chain_model.hpp"

namespace subvarx {

/// Second-order VARX model of one substructure, stored in the canonical form
///
///   z(n) = A1 z(n-1) + A2 z(n-2) + B1 u(n-1)
///
/// where z collects the internal (endogenous) displacements and u the two
/// interface (exogenous) displacements, ordered [lower, upper]. When built
/// from a chain, a1 is tridiagonal, a2 = -I, and b1 is nonzero only at
/// (1,1) and (q,2). Estimated instances carry the same layout with small
/// numerical residue off the structural pattern.
struct VarxModel {
  Eigen::MatrixXd a1; // q x q
  Eigen::MatrixXd a2; // q x q
  Eigen::MatrixXd b1; // q x 2
  double ts = 0.0;    // sampling period, s

  std::vector<int> endogenous_labels; // global DOF index per row of z
  std::vector<int> exogenous_labels;  // {lower_interface, upper_interface}

  int dimension() const { return static_cast<int>(a1.rows()); }
};

/// Analytic VARX matrices of the substructure, from physical parameters.
/// For internal DOF g on local row r:
///   a1(r,r)   = 2 - ts^2 (k_g + k_{g+1}) / m_g
///   a1(r,r+1) = ts^2 k_{g+1} / m_g,   a1(r,r-1) = ts^2 k_g / m_g
///   a2 = -I
///   b1(1,1) = ts^2 k_{i+1} / m_{i+1},  b1(q,2) = ts^2 k_u / m_{u-1}
/// with i = lower interface, u = upper interface.
VarxModel ground_truth_varx(const ChainModel &model, const SubstructureSpec &spec, double ts);

} // namespace subvarx
