#pragma once

#include <functional>
#include <variant>
#include <vector>

#include <Eigen/Dense>

namespace asymshap {

/// Additive polynomial model: intercept + sum_j sum_d coefficients[j](d-1) * x_j^d.
struct LinearModel {
  double intercept = 0.0;
  std::vector<Eigen::VectorXd> coefficients;

  static LinearModel linear(double intercept, const Eigen::VectorXd& slopes);

  int num_vars() const { return static_cast<int>(coefficients.size()); }
  int degree(int j) const { return static_cast<int>(coefficients[static_cast<std::size_t>(j)].size()); }
  /// Throws InvalidInput if any variable has no coefficient.
  void validate() const;

  double predict_row(const Eigen::Ref<const Eigen::VectorXd>& x) const;
  Eigen::VectorXd predict(const Eigen::MatrixXd& rows) const;
};

/// Externally supplied batch predictor, one prediction per row.
struct TabulatedModel {
  int num_vars = 0;
  std::function<Eigen::VectorXd(const Eigen::MatrixXd&)> predict_batch;
};

using PredictionModel = std::variant<LinearModel, TabulatedModel>;

int num_vars(const PredictionModel& model);
double predict_row(const PredictionModel& model, const Eigen::Ref<const Eigen::VectorXd>& x);
Eigen::VectorXd predict(const PredictionModel& model, const Eigen::MatrixXd& rows);

/// Ordinary least squares on the polynomial expansion given by `degrees` (one entry per column).
LinearModel fit_ols(const Eigen::MatrixXd& x, const Eigen::VectorXd& y, const std::vector<int>& degrees);

}  // namespace asymshap
