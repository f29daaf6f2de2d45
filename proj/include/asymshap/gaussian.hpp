#pragma once

#include <vector>

#include <Eigen/Dense>

namespace asymshap {

/// Throws InvalidInput unless cov is square, symmetric to 1e-10 and positive semidefinite.
void validate_covariance(const Eigen::MatrixXd& cov);

struct GaussianMoments {
  Eigen::VectorXd mean;
  Eigen::MatrixXd cov;
};

/// Distribution of the coordinates not in `given` after fixing x[given] = values.
///
/// Regular given-blocks are solved by Cholesky. Given-blocks with condition number above 1e12
/// use the pseudo-inverse, which is the exact conditional law of a degenerate Gaussian;
/// values off the support of such a block throw SingularConditioning.
class GaussianConditioner {
 public:
  GaussianConditioner(const Eigen::VectorXd& mean, const Eigen::MatrixXd& cov, std::vector<int> given);

  const std::vector<int>& given() const { return given_; }
  const std::vector<int>& free() const { return free_; }

  Eigen::VectorXd mean(const Eigen::Ref<const Eigen::VectorXd>& given_values) const;
  /// One conditional mean per row of given_rows (rows are observations of the given coordinates).
  Eigen::MatrixXd mean_rows(const Eigen::MatrixXd& given_rows) const;
  const Eigen::MatrixXd& cov() const { return cov_; }
  /// L with L L^T = cov(), negative round-off eigenvalues clipped to zero.
  const Eigen::MatrixXd& factor() const { return factor_; }

 private:
  void check_support(const Eigen::Ref<const Eigen::VectorXd>& centered) const;

  std::vector<int> given_;
  std::vector<int> free_;
  Eigen::VectorXd mean_free_;
  Eigen::VectorXd mean_given_;
  Eigen::MatrixXd gain_;       // free x given
  Eigen::MatrixXd null_basis_; // given x k, empty for regular blocks
  Eigen::MatrixXd cov_;
  Eigen::MatrixXd factor_;
};

GaussianMoments gaussian_conditional(const Eigen::VectorXd& mean, const Eigen::MatrixXd& cov,
                                     const std::vector<int>& given, const Eigen::VectorXd& values);

/// Raw moments E[X^1..X^degree] of N(mean, variance).
Eigen::VectorXd normal_raw_moments(double mean, double variance, int degree);

}  // namespace asymshap
