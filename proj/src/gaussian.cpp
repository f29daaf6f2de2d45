#include "asymshap/gaussian.hpp"

#include <algorithm>
#include <cmath>

#include "asymshap/errors.hpp"

namespace asymshap {

namespace {

constexpr double kConditionLimit = 1e12;
constexpr double kSupportTolerance = 1e-6;

Eigen::MatrixXd psd_factor(const Eigen::MatrixXd& cov) {
  if (cov.size() == 0) return cov;
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(cov);
  Eigen::VectorXd root = eig.eigenvalues().cwiseMax(0.0).cwiseSqrt();
  return eig.eigenvectors() * root.asDiagonal();
}

}  // namespace

void validate_covariance(const Eigen::MatrixXd& cov) {
  if (cov.rows() != cov.cols()) throw Error(ErrorCode::InvalidInput, "covariance must be square");
  if (!cov.allFinite()) throw Error(ErrorCode::InvalidInput, "covariance must be finite");
  if ((cov - cov.transpose()).cwiseAbs().maxCoeff() > 1e-10) {
    throw Error(ErrorCode::InvalidInput, "covariance must be symmetric");
  }
  if (cov.size() == 0) return;
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(cov, Eigen::EigenvaluesOnly);
  const double scale = std::max(1.0, eig.eigenvalues().cwiseAbs().maxCoeff());
  if (eig.eigenvalues().minCoeff() < -1e-10 * scale) {
    throw Error(ErrorCode::InvalidInput, "covariance must be positive semidefinite");
  }
}

GaussianConditioner::GaussianConditioner(const Eigen::VectorXd& mean, const Eigen::MatrixXd& cov, std::vector<int> given)
    : given_(std::move(given)) {
  const auto p = static_cast<int>(mean.size());
  std::sort(given_.begin(), given_.end());
  for (int j = 0, k = 0; j < p; ++j) {
    if (k < static_cast<int>(given_.size()) && given_[static_cast<std::size_t>(k)] == j) {
      ++k;
    } else {
      free_.push_back(j);
    }
  }
  mean_free_ = mean(free_);
  mean_given_ = mean(given_);
  const Eigen::MatrixXd s_ff = cov(free_, free_);
  if (given_.empty()) {
    gain_.setZero(static_cast<Eigen::Index>(free_.size()), 0);
    cov_ = s_ff;
    factor_ = psd_factor(cov_);
    return;
  }
  const Eigen::MatrixXd s_gg = cov(given_, given_);
  const Eigen::MatrixXd s_fg = cov(free_, given_);

  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(s_gg);
  const Eigen::VectorXd& lambda = eig.eigenvalues();
  const double top = lambda.cwiseAbs().maxCoeff();
  const double bottom = lambda.minCoeff();
  if (bottom > 0 && top / bottom <= kConditionLimit) {
    Eigen::LLT<Eigen::MatrixXd> llt(s_gg);
    gain_ = llt.solve(s_fg.transpose()).transpose();
  } else {
    const double cut = top * 1.0 / kConditionLimit;
    Eigen::VectorXd inv = Eigen::VectorXd::Zero(lambda.size());
    std::vector<Eigen::Index> null_cols;
    for (Eigen::Index i = 0; i < lambda.size(); ++i) {
      if (lambda(i) > cut) {
        inv(i) = 1.0 / lambda(i);
      } else {
        null_cols.push_back(i);
      }
    }
    const Eigen::MatrixXd& v = eig.eigenvectors();
    gain_ = s_fg * v * inv.asDiagonal() * v.transpose();
    null_basis_ = v(Eigen::all, null_cols);
  }
  cov_ = s_ff - gain_ * s_fg.transpose();
  cov_ = 0.5 * (cov_ + cov_.transpose());
  factor_ = psd_factor(cov_);
}

void GaussianConditioner::check_support(const Eigen::Ref<const Eigen::VectorXd>& centered) const {
  if (null_basis_.cols() == 0) return;
  const double off = (null_basis_.transpose() * centered).norm();
  if (off > kSupportTolerance * (1.0 + centered.norm())) {
    throw Error(ErrorCode::SingularConditioning, "conditioning values lie outside the support of a singular covariance block");
  }
}

Eigen::VectorXd GaussianConditioner::mean(const Eigen::Ref<const Eigen::VectorXd>& given_values) const {
  const Eigen::VectorXd centered = given_values - mean_given_;
  check_support(centered);
  return mean_free_ + gain_ * centered;
}

Eigen::MatrixXd GaussianConditioner::mean_rows(const Eigen::MatrixXd& given_rows) const {
  Eigen::MatrixXd centered = given_rows.rowwise() - mean_given_.transpose();
  for (Eigen::Index i = 0; i < centered.rows(); ++i) check_support(centered.row(i).transpose());
  return (centered * gain_.transpose()).rowwise() + mean_free_.transpose();
}

GaussianMoments gaussian_conditional(const Eigen::VectorXd& mean, const Eigen::MatrixXd& cov,
                                     const std::vector<int>& given, const Eigen::VectorXd& values) {
  if (cov.rows() != mean.size()) throw Error(ErrorCode::InvalidInput, "mean and covariance sizes differ");
  if (static_cast<Eigen::Index>(given.size()) != values.size()) {
    throw Error(ErrorCode::InvalidInput, "one value per conditioning index is required");
  }
  for (int g : given)
    if (g < 0 || g >= mean.size()) throw Error(ErrorCode::InvalidInput, "conditioning index out of range");
  // Values follow the caller's index order; the conditioner works on sorted indices.
  std::vector<std::pair<int, double>> pairs;
  for (std::size_t i = 0; i < given.size(); ++i) pairs.emplace_back(given[i], values(static_cast<Eigen::Index>(i)));
  std::sort(pairs.begin(), pairs.end());
  std::vector<int> sorted;
  Eigen::VectorXd sorted_values(static_cast<Eigen::Index>(pairs.size()));
  for (std::size_t i = 0; i < pairs.size(); ++i) {
    sorted.push_back(pairs[i].first);
    sorted_values(static_cast<Eigen::Index>(i)) = pairs[i].second;
  }
  GaussianConditioner cond(mean, cov, sorted);
  return {cond.mean(sorted_values), cond.cov()};
}

Eigen::VectorXd normal_raw_moments(double mean, double variance, int degree) {
  Eigen::VectorXd m(degree + 1);
  m(0) = 1.0;
  if (degree >= 1) m(1) = mean;
  for (int d = 2; d <= degree; ++d) m(d) = mean * m(d - 1) + (d - 1) * variance * m(d - 2);
  return m.tail(degree);
}

}  // namespace asymshap
