#pragma once

#include <vector>

#include <Eigen/Dense>

namespace asymshap {

/// Principal-component summary of a block of variables (typically a wide feature group).
struct HighDimSummary {
  std::vector<int> vars;          // columns of the full variable space
  Eigen::VectorXd center;         // column means of the block
  Eigen::MatrixXd loadings;       // |vars| x k, orthonormal columns
  Eigen::MatrixXd projections;    // n x k training scores
  Eigen::VectorXd explained;      // explained-variance fraction per component

  int components() const { return static_cast<int>(loadings.cols()); }
  Eigen::VectorXd project(const Eigen::Ref<const Eigen::VectorXd>& block_values) const;
};

/// Top-k principal components of x(:, vars). Each loading vector is signed so that its
/// largest-magnitude entry is positive. Throws RankDeficient if fewer than k singular values
/// are numerically nonzero, InvalidInput if k is out of range.
HighDimSummary summary_fit(const Eigen::MatrixXd& x, const std::vector<int>& vars, int k);

/// Training row whose projection is closest to q in Euclidean distance; lowest index on ties.
Eigen::Index nearest_neighbor_index(const HighDimSummary& summary, const Eigen::Ref<const Eigen::VectorXd>& q);

/// Block values of that training row, taken from the original data matrix.
Eigen::VectorXd nearest_neighbor_reconstruct(const HighDimSummary& summary, const Eigen::Ref<const Eigen::VectorXd>& q,
                                             const Eigen::MatrixXd& x);

}  // namespace asymshap
