#pragma once

#include <Eigen/Dense>

#include <vector>

#include "subvarx/simulate.hpp"
#include "subvarx/varx_model.hpp"

namespace subvarx {

/// Multivariate regression Y = B X laid out column-per-time-index:
/// target column n holds z(n), regressor column n stacks
/// [z(n-1); z(n-2); u(n-1)].
struct RegressionProblem {
  Eigen::MatrixXd targets;    // q x T
  Eigen::MatrixXd regressors; // (2q + 2) x T
  int endogenous_dim = 0;     // q
  long usable_samples = 0;    // T = samples - 2
};

struct EstimationDiagnostics {
  Eigen::VectorXd residual_rms;     // per endogenous channel, m
  double condition_indicator = 1.0; // sigma_max / sigma_min of the regressor Gram matrix
  long samples_used = 0;
};

/// Lag structure is fixed by the model class: two endogenous lags, one
/// exogenous lag, no intercept.
RegressionProblem assemble_regression(const DisplacementRecord &endogenous,
                                      const DisplacementRecord &exogenous);

struct Estimate {
  VarxModel model;
  EstimationDiagnostics diagnostics;
};

/// Multivariable least squares: minimizes ||Y - B X||_F over the coefficient
/// block B = [A1 A2 B1] via an SVD of the regressor matrix (no normal
/// equations). Throws RankDeficient when the smallest singular value falls
/// below 1e-10 of the largest.
Estimate mls_estimate(const RegressionProblem &problem, double ts,
                      const std::vector<int> &endogenous_labels,
                      const std::vector<int> &exogenous_labels);

/// assemble_regression + mls_estimate with labels taken from the records.
Estimate estimate_varx(const DisplacementRecord &endogenous, const DisplacementRecord &exogenous);

/// A1 z_prev + A2 z_prev2 + B1 u_prev.
Eigen::VectorXd predict_one_step(const VarxModel &model,
                                 const Eigen::Ref<const Eigen::VectorXd> &z_prev,
                                 const Eigen::Ref<const Eigen::VectorXd> &z_prev2,
                                 const Eigen::Ref<const Eigen::VectorXd> &u_prev);

/// One-step-ahead residual RMS of `model` over the given records, plus the
/// regressor conditioning of the implied problem.
EstimationDiagnostics residual_stats(const VarxModel &model, const DisplacementRecord &endogenous,
                                     const DisplacementRecord &exogenous);

} // namespace subvarx
