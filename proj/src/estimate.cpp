#include "subvarx/estimate.hpp"

#include <Eigen/SVD>

#include <cmath>
#include <string>

namespace subvarx {

namespace {

constexpr double rank_tolerance = 1e-10;

Eigen::VectorXd rms_per_row(const Eigen::MatrixXd &residual) {
  return residual.array().square().rowwise().mean().sqrt().matrix();
}

} // namespace

RegressionProblem assemble_regression(const DisplacementRecord &endogenous,
                                      const DisplacementRecord &exogenous) {
  const long rows = endogenous.sample_count();
  if (exogenous.sample_count() != rows)
    throw LengthMismatch("endogenous record has " + std::to_string(rows) + " samples but exogenous has " +
                         std::to_string(exogenous.sample_count()));
  if (endogenous.dt != exogenous.dt)
    throw DimensionMismatch("endogenous period " + std::to_string(endogenous.dt) +
                            " differs from exogenous period " + std::to_string(exogenous.dt));
  if (exogenous.channel_count() != 2)
    throw ChannelCountMismatch("expected 2 exogenous channels, got " +
                               std::to_string(exogenous.channel_count()));
  const int q = endogenous.channel_count();
  if (q < 1)
    throw ChannelCountMismatch("need at least one endogenous channel");
  const int p = 2 * q + 2;
  // z(n) regressed on [z(n-1); z(n-2); u(n-1)]: usable targets start at the
  // third sample.
  const long t = rows - 2;
  if (t < p)
    throw TooFewSamples("need at least " + std::to_string(p + 2) + " samples for " + std::to_string(p) +
                        " regressors per row, got " + std::to_string(rows));

  RegressionProblem problem;
  problem.endogenous_dim = q;
  problem.usable_samples = t;
  problem.targets = endogenous.data.bottomRows(t).transpose();
  problem.regressors.resize(p, t);
  problem.regressors.topRows(q) = endogenous.data.middleRows(1, t).transpose();
  problem.regressors.middleRows(q, q) = endogenous.data.topRows(t).transpose();
  problem.regressors.bottomRows(2) = exogenous.data.middleRows(1, t).transpose();
  return problem;
}

Estimate mls_estimate(const RegressionProblem &problem, double ts,
                      const std::vector<int> &endogenous_labels, const std::vector<int> &exogenous_labels) {
  const int q = problem.endogenous_dim;
  const int p = 2 * q + 2;
  if (static_cast<int>(endogenous_labels.size()) != q || exogenous_labels.size() != 2)
    throw DimensionMismatch("labels do not match the problem layout: " +
                            std::to_string(endogenous_labels.size()) + " endogenous, " +
                            std::to_string(exogenous_labels.size()) + " exogenous for q = " + std::to_string(q));

  // Singular values of the regressor matrix itself resolve rank where the
  // Gram matrix X X^T would round the small ones away.
  Eigen::BDCSVD<Eigen::MatrixXd> svd(problem.regressors.transpose(),
                                     Eigen::ComputeThinU | Eigen::ComputeThinV);
  const Eigen::VectorXd &sigma = svd.singularValues();
  const double smax = sigma[0];
  const double smin = sigma[p - 1];
  if (!(smin > rank_tolerance * smax))
    throw RankDeficient("regressor matrix is rank deficient (singular value ratio " +
                        std::to_string(smax > 0.0 ? smin / smax : 0.0) +
                        "); the signals do not excite every mode");
  svd.setThreshold(rank_tolerance);

  const Eigen::MatrixXd coef = svd.solve(problem.targets.transpose()).transpose();

  Estimate out;
  out.model.ts = ts;
  out.model.a1 = coef.leftCols(q);
  out.model.a2 = coef.middleCols(q, q);
  out.model.b1 = coef.rightCols(2);
  out.model.endogenous_labels = endogenous_labels;
  out.model.exogenous_labels = exogenous_labels;

  out.diagnostics.residual_rms = rms_per_row(problem.targets - coef * problem.regressors);
  const double ratio = smax / smin;
  out.diagnostics.condition_indicator = ratio * ratio;
  out.diagnostics.samples_used = problem.usable_samples;
  return out;
}

Estimate estimate_varx(const DisplacementRecord &endogenous, const DisplacementRecord &exogenous) {
  return mls_estimate(assemble_regression(endogenous, exogenous), endogenous.dt, endogenous.dof_labels,
                      exogenous.dof_labels);
}

Eigen::VectorXd predict_one_step(const VarxModel &model, const Eigen::Ref<const Eigen::VectorXd> &z_prev,
                                 const Eigen::Ref<const Eigen::VectorXd> &z_prev2,
                                 const Eigen::Ref<const Eigen::VectorXd> &u_prev) {
  const int q = model.dimension();
  if (z_prev.size() != q || z_prev2.size() != q)
    throw DimensionMismatch("state vectors must have " + std::to_string(q) + " entries");
  if (u_prev.size() != model.b1.cols())
    throw DimensionMismatch("input vector must have " + std::to_string(model.b1.cols()) + " entries");
  return model.a1 * z_prev + model.a2 * z_prev2 + model.b1 * u_prev;
}

EstimationDiagnostics residual_stats(const VarxModel &model, const DisplacementRecord &endogenous,
                                     const DisplacementRecord &exogenous) {
  const int q = model.dimension();
  if (endogenous.channel_count() != q)
    throw DimensionMismatch("model has " + std::to_string(q) + " endogenous channels, record has " +
                            std::to_string(endogenous.channel_count()));
  if (model.ts != endogenous.dt)
    throw DimensionMismatch("model period " + std::to_string(model.ts) + " differs from record period " +
                            std::to_string(endogenous.dt));
  const RegressionProblem problem = assemble_regression(endogenous, exogenous);
  Eigen::MatrixXd coef(q, 2 * q + 2);
  coef << model.a1, model.a2, model.b1;

  EstimationDiagnostics out;
  out.residual_rms = rms_per_row(problem.targets - coef * problem.regressors);
  Eigen::BDCSVD<Eigen::MatrixXd> svd(problem.regressors.transpose());
  const Eigen::VectorXd &sigma = svd.singularValues();
  const double ratio = sigma[0] / sigma[2 * q + 1];
  out.condition_indicator = ratio * ratio;
  out.samples_used = problem.usable_samples;
  return out;
}

} // namespace subvarx
