#pragma once

#include <cstdint>
#include <optional>
#include <variant>
#include <vector>

#include <Eigen/Dense>

#include "asymshap/coalition.hpp"
#include "asymshap/dataset.hpp"
#include "asymshap/metrics.hpp"
#include "asymshap/model.hpp"
#include "asymshap/partial_order.hpp"
#include "asymshap/summary.hpp"

namespace asymshap {

inline constexpr int kDefaultDraws = 100;

/// Joint Gaussian over all model variables. Polynomial models are marginalized in closed form;
/// other models average `draws` conditional samples.
struct GaussianDependency {
  Eigen::VectorXd mean;
  Eigen::MatrixXd cov;
  int draws = kDefaultDraws;

  /// Validates the covariance (symmetric, PSD).
  static GaussianDependency analytic(Eigen::VectorXd mean, Eigen::MatrixXd cov, int draws = kDefaultDraws);
  /// Sample mean and covariance (denominator n - 1).
  static GaussianDependency fit(const Eigen::MatrixXd& x, int draws = kDefaultDraws);
  /// Same marginals as fit() with all cross-covariances zeroed (marginal Shapley values).
  static GaussianDependency independent(const Eigen::MatrixXd& x, int draws = kDefaultDraws);
};

/// Monte Carlo dependency model. A Gaussian is fitted on the modelling space
/// [summary components..., remaining variables...]; absent coordinates are drawn from its
/// conditional and a drawn summary is mapped back to the nearest training row of the block.
struct EmpiricalMC {
  GaussianDependency space;
  std::optional<HighDimSummary> summary;
  std::vector<int> direct_vars;   // original columns modelled directly, in space order
  Eigen::MatrixXd training;
  int draws = kDefaultDraws;

  static EmpiricalMC fit(const Eigen::MatrixXd& x, int draws = kDefaultDraws);
  static EmpiricalMC fit(const Eigen::MatrixXd& x, const std::vector<int>& summary_vars, int components,
                         int draws = kDefaultDraws);
};

using DependencyModel = std::variant<GaussianDependency, EmpiricalMC>;

/// Contribution function: conditional expectation of the prediction given the coalition's values
/// (local), or a performance metric of those marginalized predictions across rows (global).
///
/// Monte Carlo paths draw from a stream derived from (seed, coalition, stream id), so results
/// do not depend on evaluation order or thread count.
class ValueFunction {
 public:
  ValueFunction(FeatureSet features, PredictionModel model, DependencyModel dependency, std::uint64_t seed = 0);

  const FeatureSet& features() const { return features_; }
  const PredictionModel& model() const { return model_; }
  const DependencyModel& dependency() const { return dependency_; }

  double local(Coalition s, const Eigen::Ref<const Eigen::VectorXd>& x_star, std::uint64_t stream = 0) const;
  /// local() for every row; row i uses stream first_stream + i.
  Eigen::VectorXd local_rows(Coalition s, const Eigen::MatrixXd& rows, std::uint64_t first_stream = 0) const;

  /// Empty coalition: 0 for R^2, 0.5 for the C-index. Throws MetricUndefined when the metric
  /// cannot be computed on `data`.
  double global(Coalition s, const Dataset& data, MetricKind metric) const;

 private:
  Eigen::VectorXd gaussian_rows(const GaussianDependency& dep, Coalition s, const Eigen::MatrixXd& rows,
                                std::uint64_t first_stream) const;
  Eigen::VectorXd empirical_rows(const EmpiricalMC& dep, Coalition s, const Eigen::MatrixXd& rows,
                                 std::uint64_t first_stream) const;

  FeatureSet features_;
  PredictionModel model_;
  DependencyModel dependency_;
  std::uint64_t seed_;
};

double nu_local(Coalition s, const Eigen::Ref<const Eigen::VectorXd>& x_star, const ValueFunction& vf);
double nu_global(Coalition s, const Dataset& data, const ValueFunction& vf, MetricKind metric);

/// Metric of the constant baseline prediction used as the empty-coalition value.
double metric_baseline(MetricKind metric);

/// Throws MetricUndefined/InvalidInput if `metric` cannot be evaluated on data.
void check_metric_data(const Dataset& data, MetricKind metric);

double evaluate_metric(const Dataset& data, MetricKind metric, const Eigen::Ref<const Eigen::VectorXd>& predictions);

}  // namespace asymshap
