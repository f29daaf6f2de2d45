#include "asymshap/summary.hpp"

#include <limits>

#include "asymshap/errors.hpp"

namespace asymshap {

Eigen::VectorXd HighDimSummary::project(const Eigen::Ref<const Eigen::VectorXd>& block_values) const {
  return loadings.transpose() * (block_values - center);
}

HighDimSummary summary_fit(const Eigen::MatrixXd& x, const std::vector<int>& vars, int k) {
  const auto n = x.rows();
  const auto width = static_cast<Eigen::Index>(vars.size());
  if (k < 1 || k > std::min(n, width)) throw Error(ErrorCode::InvalidInput, "component count must lie in 1..min(n, width)");
  for (int v : vars)
    if (v < 0 || v >= x.cols()) throw Error(ErrorCode::InvalidInput, "summary variable out of range");

  HighDimSummary out;
  out.vars = vars;
  const Eigen::MatrixXd block = x(Eigen::all, vars);
  out.center = block.colwise().mean().transpose();
  const Eigen::MatrixXd centered = block.rowwise() - out.center.transpose();

  Eigen::BDCSVD<Eigen::MatrixXd> svd(centered, Eigen::ComputeThinV);
  const Eigen::VectorXd& s = svd.singularValues();
  const double tol = std::max(n, width) * std::numeric_limits<double>::epsilon() * (s.size() ? s(0) : 0.0);
  int nonzero = 0;
  for (Eigen::Index i = 0; i < s.size(); ++i)
    if (s(i) > tol && s(i) > 0) ++nonzero;
  if (nonzero < k) throw Error(ErrorCode::RankDeficient, "block has fewer than k nonzero singular values");

  out.loadings = svd.matrixV().leftCols(k);
  for (int c = 0; c < k; ++c) {
    Eigen::Index arg;
    out.loadings.col(c).cwiseAbs().maxCoeff(&arg);
    if (out.loadings(arg, c) < 0) out.loadings.col(c) *= -1.0;
  }
  out.projections = centered * out.loadings;
  const double total = s.squaredNorm();
  out.explained = s.head(k).cwiseAbs2() / total;
  return out;
}

Eigen::Index nearest_neighbor_index(const HighDimSummary& summary, const Eigen::Ref<const Eigen::VectorXd>& q) {
  Eigen::Index best = 0;
  double best_dist = std::numeric_limits<double>::infinity();
  for (Eigen::Index i = 0; i < summary.projections.rows(); ++i) {
    const double d = (summary.projections.row(i).transpose() - q).squaredNorm();
    if (d < best_dist) {
      best_dist = d;
      best = i;
    }
  }
  return best;
}

Eigen::VectorXd nearest_neighbor_reconstruct(const HighDimSummary& summary, const Eigen::Ref<const Eigen::VectorXd>& q,
                                             const Eigen::MatrixXd& x) {
  return x(nearest_neighbor_index(summary, q), summary.vars).transpose();
}

}  // namespace asymshap
