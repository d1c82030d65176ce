#include "subvarx/varx_model.hpp"

namespace subvarx {

VarxModel ground_truth_varx(const ChainModel &model, const SubstructureSpec &spec, double ts) {
  validate_substructure(model, spec);
  if (!(ts > 0.0))
    throw NonPositiveParameter("ts", ts);

  const int q = spec.internal_count();
  const double h2 = ts * ts;
  const auto &k = model.stiffnesses;
  const auto &m = model.masses;

  VarxModel out;
  out.ts = ts;
  out.a1 = Eigen::MatrixXd::Zero(q, q);
  out.a2 = Eigen::MatrixXd::Zero(q, q);
  out.a2.diagonal().setConstant(-1.0);
  out.b1 = Eigen::MatrixXd::Zero(q, 2);
  out.endogenous_labels = spec.internal_dofs();
  out.exogenous_labels = {spec.lower_interface, spec.upper_interface};

  for (int r = 0; r < q; ++r) {
    // 1-based DOF index of internal row r; springs k[g-1], k[g] flank DOF g.
    const int g = spec.lower_interface + 1 + r;
    const double k_low = k[g - 1];
    const double k_up = g < model.dof_count() ? k[g] : 0.0;
    out.a1(r, r) = 2.0 - h2 * (k_low + k_up) / m[g - 1];
    if (r > 0)
      out.a1(r, r - 1) = h2 * k_low / m[g - 1];
    if (r + 1 < q)
      out.a1(r, r + 1) = h2 * k_up / m[g - 1];
  }

  const int g_lo = spec.lower_interface + 1;
  const int g_hi = spec.upper_interface - 1;
  out.b1(0, 0) = h2 * k[g_lo - 1] / m[g_lo - 1];
  out.b1(q - 1, 1) = h2 * k[g_hi] / m[g_hi - 1];
  return out;
}

} // namespace subvarx
