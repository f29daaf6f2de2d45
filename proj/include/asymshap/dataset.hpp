#pragma once

#include <optional>
#include <string>
#include <vector>

#include <Eigen/Dense>

namespace asymshap {

/// Model variables (n rows x p columns) with an optional outcome and event indicator.
struct Dataset {
  Eigen::MatrixXd x;
  std::vector<std::string> names;
  std::optional<Eigen::VectorXd> y;
  std::optional<Eigen::VectorXd> event;

  Eigen::Index rows() const { return x.rows(); }
  Eigen::Index cols() const { return x.cols(); }

  /// Throws InvalidInput on non-finite values, fewer than two rows, or mismatched lengths.
  void validate() const;
  Dataset select_rows(const std::vector<Eigen::Index>& idx) const;
};

/// Reads a headered CSV. `outcome` and `event` name columns that are split off; the
/// remaining columns, in file order, become the model variables.
Dataset read_dataset_csv(const std::string& path, const std::optional<std::string>& outcome,
                         const std::optional<std::string>& event);

}  // namespace asymshap
